"""Shared machinery for backends that compute with modules over a quiver.

A backend fixes a list of standard indecomposable modules ("types").  Each
type either is an indecomposable of the category or is zero there (the free
module in a stable category).  Objects of the category are realized as direct
sums of standard types, morphisms through hom-space representatives, and
E-extensions through a backend-specific cocycle model.  Triangles carry a
module-level short exact sequence as their witness, which makes pushouts,
pullbacks and deflation completions plain kernel/cokernel computations.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .. import linalg as la
from .. import reps as rp
from ..category import (BasedCategory, CategoryError, ExtData, ExtElem, Indec, Mor, Obj,
                        Triangle, act_left, act_right, compose, pushforward_matrix)


class BackendError(CategoryError):
    pass


@dataclass(frozen=True, eq=False)
class ModSeq:
    """A short exact sequence ``A -f-> B -g-> C`` of standard direct sums."""
    a_types: tuple[int, ...]
    b_types: tuple[int, ...]
    c_types: tuple[int, ...]
    f: rp.RepMap
    g: rp.RepMap


@dataclass
class ShiftedSquare:
    m_obj: Obj
    m1: Mor
    m2: Mor
    e1: Mor
    e2: Mor
    t1: Triangle
    t2: Triangle
    row: Triangle
    column: Triangle
    equation_holds: bool


class ModuleBackend:
    """Base class; subclasses fill in the types and the E-model hooks."""

    quiver: rp.Quiver
    p: int
    types: list[rp.Rep]
    tops: list[Callable[[rp.RepMap], int]]
    cat_of_type: list[int | None]
    type_of_cat: list[int]
    cat: BasedCategory

    def __init__(self, quiver: rp.Quiver, p: int):
        self.quiver = quiver
        self.p = p
        self._std: dict[tuple[int, ...], rp.Rep] = {}

    # ------------------------------------------------------------------ hooks
    def hom_reps(self, i: int, j: int) -> list[rp.RepMap]:
        raise NotImplementedError

    def hom_coords(self, i: int, j: int, f: rp.RepMap) -> np.ndarray:
        raise NotImplementedError

    def ext_dim(self, j: int, i: int) -> int:
        raise NotImplementedError

    def left_action(self, j: int, i: int, i2: int) -> np.ndarray:
        raise NotImplementedError

    def right_action(self, j: int, j2: int, i: int) -> np.ndarray:
        raise NotImplementedError

    def realize_module(self, d: ExtElem) -> tuple[rp.Rep, rp.RepMap, rp.RepMap]:
        raise NotImplementedError

    def classify(self, seq: ModSeq) -> ExtElem:
        raise NotImplementedError

    def make_epi(self, h: rp.RepMap, b_types: tuple[int, ...],
                 d_types: tuple[int, ...]) -> tuple[tuple[int, ...], rp.RepMap] | None:
        raise NotImplementedError

    # --------------------------------------------------------------- modules
    def std(self, types: Sequence[int]) -> rp.Rep:
        key = tuple(types)
        if key not in self._std:
            self._std[key] = rp.direct_sum([self.types[k] for k in key], self.quiver)
        return self._std[key]

    def types_of(self, x: Obj) -> tuple[int, ...]:
        return tuple(self.type_of_cat[i] for i in x)

    def obj_of(self, types: Sequence[int]) -> Obj:
        return Obj(tuple(self.cat_of_type[k] for k in types if self.cat_of_type[k] is not None))

    def decompose(self, m: rp.Rep) -> tuple[tuple[int, ...], rp.RepMap]:
        ids, alpha = rp.decompose(m, self.types, self.tops, self.p)
        return tuple(ids), alpha

    def mor_to_map(self, f: Mor) -> rp.RepMap:
        st, dt = self.types_of(f.src), self.types_of(f.dst)
        src, dst = self.std(st), self.std(dt)
        blocks = [[rp.combine(f.blocks[t][s], self.hom_reps(f.src.summands[s], f.dst.summands[t]),
                              self.types[st[s]], self.types[dt[t]], self.p)
                   for s in range(len(st))] for t in range(len(dt))]
        return rp.block_map([self.types[k] for k in st], [self.types[k] for k in dt], blocks, src, dst)

    def map_to_mor(self, f: rp.RepMap, src_types: Sequence[int], dst_types: Sequence[int]) -> Mor:
        sp = [self.types[k] for k in src_types]
        dp = [self.types[k] for k in dst_types]
        rows = []
        for t, kt in enumerate(dst_types):
            j = self.cat_of_type[kt]
            if j is None:
                continue
            row = []
            for s, ks in enumerate(src_types):
                i = self.cat_of_type[ks]
                if i is None:
                    continue
                row.append(self.hom_coords(i, j, rp.sub_block(f, sp, dp, t, s)))
            rows.append(tuple(row))
        return Mor(self.cat, self.obj_of(src_types), self.obj_of(dst_types), tuple(rows))

    def seq_triangle(self, seq: ModSeq, delta: ExtElem | None = None) -> Triangle:
        if delta is None:
            delta = self.classify(seq)
        return Triangle(self.map_to_mor(seq.f, seq.a_types, seq.b_types),
                        self.map_to_mor(seq.g, seq.b_types, seq.c_types), delta, seq)

    def _normalize_middle(self, b: rp.Rep, f: rp.RepMap, g: rp.RepMap):
        ids, alpha = self.decompose(b)
        inv = rp.invert(alpha, self.p)
        return ids, rp.compose(inv, f, self.p), rp.compose(g, alpha, self.p), inv

    # ------------------------------------------------------------ build data
    def build(self, label: str, names: Sequence[str], aliases: Sequence[tuple[str, ...]],
              projective: Sequence[bool] | None = None, suspension: Sequence[int] | None = None,
              suspension_hom: Callable[[int, int], np.ndarray] | None = None) -> BasedCategory:
        p = self.p
        n = len(names)
        field = la.FieldSpec(p)
        hom_dim = np.zeros((n, n), dtype=np.int64)
        for i in range(n):
            for j in range(n):
                hom_dim[i, j] = len(self.hom_reps(i, j))
        comp = {}
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    hij, hjk, hik = hom_dim[i, j], hom_dim[j, k], hom_dim[i, k]
                    tens = np.zeros((hij, hjk, hik), dtype=np.int64)
                    if hij and hjk and hik:
                        for a, fa in enumerate(self.hom_reps(i, j)):
                            for b, fb in enumerate(self.hom_reps(j, k)):
                                tens[a, b] = self.hom_coords(i, k, rp.compose(fb, fa, p))
                    comp[i, j, k] = tens
        ident = tuple(self.hom_coords(i, i, rp.identity_map(self.types[self.type_of_cat[i]]))
                      for i in range(n))
        top = tuple(np.array([self.tops[self.type_of_cat[i]](f) % p for f in self.hom_reps(i, i)],
                             dtype=np.int64) for i in range(n))
        dims = {(j, i): self.ext_dim(j, i) for j in range(n) for i in range(n)}
        left = {(j, i, i2): self.left_action(j, i, i2)
                for j in range(n) for i in range(n) for i2 in range(n)}
        right = {(j, j2, i): self.right_action(j, j2, i)
                 for j in range(n) for j2 in range(n) for i in range(n)}
        if projective is None:
            projective = [all(dims[i, x] == 0 for x in range(n)) for i in range(n)]
        residues = [_residue_dim(comp, ident, top, hom_dim, i, p) for i in range(n)]
        indecs = tuple(Indec(i, names[i], bool(projective[i]), residues[i], tuple(aliases[i]))
                       for i in range(n))
        susp_hom = None
        if suspension is not None and suspension_hom is not None:
            susp_hom = {(i, j): suspension_hom(i, j) for i in range(n) for j in range(n)}
        cat = BasedCategory(field, indecs, hom_dim, comp, ident, ExtData(dims, left, right), self,
                            label, tuple(suspension) if suspension is not None else None,
                            susp_hom, top)
        self.cat = cat
        for x in indecs:
            if x.end_residue_dim != 1:
                raise BackendError(f"End({x.name}) has residue dimension {x.end_residue_dim}")
            if x.is_projective != all(dims[x.id, y] == 0 for y in range(n)):
                raise BackendError(f"projectivity flag of {x.name} disagrees with E")
        return cat

    # ------------------------------------------------------------- triangles
    def realize(self, d: ExtElem) -> Triangle:
        b, f, g = self.realize_module(d)
        ids, f2, g2, _ = self._normalize_middle(b, f, g)
        seq = ModSeq(self.types_of(d.a_obj), ids, self.types_of(d.c_obj), f2, g2)
        if not self.classify(seq) == d:
            raise BackendError("realized sequence does not have the requested class")
        return self.seq_triangle(seq, d)

    def complete_deflation(self, h: Mor) -> Triangle | None:
        bt, dt = self.types_of(h.src), self.types_of(h.dst)
        res = self.make_epi(self.mor_to_map(h), bt, dt)
        if res is None:
            return None
        bt2, h2 = res
        k, incl = rp.kernel(h2, self.p)
        ids, alpha = self.decompose(k)
        seq = ModSeq(ids, bt2, dt, rp.compose(incl, alpha, self.p), h2)
        t = self.seq_triangle(seq)
        return Triangle(t.f, h, t.delta, seq)

    def _witness(self, t: Triangle) -> ModSeq:
        if not isinstance(t.witness, ModSeq):
            raise BackendError("triangle has no module-level witness; use a realized triangle")
        return t.witness

    def pushout(self, t: Triangle, a: Mor):
        from ..category import PushoutResult
        p = self.p
        seq = self._witness(t)
        a_mod = self.mor_to_map(a)
        at2 = self.types_of(a.dst)
        amod_dst = self.std(at2)
        bstd = self.std(seq.b_types)
        astd = self.std(seq.a_types)
        q_types = at2 + seq.b_types
        qstd = self.std(q_types)
        parts = [amod_dst, bstd]
        u = rp.block_map([astd], parts, [[a_mod], [rp.scale(-1, seq.f, p)]], astd, qstd)
        bp, q = rp.cokernel(u, p)
        incl_a = rp.block_map([amod_dst], parts, [[rp.identity_map(amod_dst)], [None]], amod_dst, qstd)
        incl_b = rp.block_map([bstd], parts, [[None], [rp.identity_map(bstd)]], bstd, qstd)
        f2 = rp.compose(q, incl_a, p)
        b_map = rp.compose(q, incl_b, p)
        cstd = self.std(seq.c_types)
        rhs = rp.block_map(parts, [cstd], [[None, seq.g]], qstd, cstd)
        g2 = rp.solve_map(bp, cstd, [(None, q)], rhs, p)
        ids, f2n, g2n, inv = self._normalize_middle(bp, f2, g2)
        b_n = rp.compose(inv, b_map, p)
        ad = act_left(a, t.delta)
        seq2 = ModSeq(at2, ids, seq.c_types, f2n, g2n)
        t2 = self.seq_triangle(seq2, ad)
        if not self.classify(seq2) == ad:
            raise BackendError("pushout sequence does not have class a*delta")
        bmor = self.map_to_mor(b_n, seq.b_types, ids)
        # A -> A' + B -> B' with maps (a; f) and (-f', b)
        bp_std = self.std(ids)
        v = rp.block_map(parts, [bp_std], [[rp.scale(-1, f2n, p), b_n]], qstd, bp_std)
        u_plain = rp.block_map([astd], parts, [[a_mod], [seq.f]], astd, qstd)
        seq3 = ModSeq(seq.a_types, q_types, ids, u_plain, v)
        expected = act_right(t.delta, t2.g)
        extra = self.seq_triangle(seq3)
        if not extra.delta == expected:
            raise BackendError("extra triangle does not have class delta g'")
        return PushoutResult(t2, bmor, extra)

    def shifted_square(self, d1: ExtElem, d2: ExtElem) -> ShiftedSquare:
        from ..category import realize
        p = self.p
        if d1.c_obj != d2.c_obj:
            raise BackendError("shifted square needs two extensions with the same first argument")
        t1, t2 = realize(d1), realize(d2)
        s1, s2 = self._witness(t1), self._witness(t2)
        b1, b2 = self.std(s1.b_types), self.std(s2.b_types)
        cstd = self.std(s1.c_types)
        sum_types = s1.b_types + s2.b_types
        bsum = self.std(sum_types)
        parts = [b1, b2]
        h = rp.block_map(parts, [cstd], [[s1.g, rp.scale(-1, s2.g, p)]], bsum, cstd)
        m, k = rp.kernel(h, p)
        a1, a2 = self.std(s1.a_types), self.std(s2.a_types)
        rhs1 = rp.block_map([a1], parts, [[s1.f], [None]], a1, bsum)
        rhs2 = rp.block_map([a2], parts, [[None], [s2.f]], a2, bsum)
        m1 = rp.solve_map(a1, m, [(k, None)], rhs1, p)
        m2 = rp.solve_map(a2, m, [(k, None)], rhs2, p)
        pr1 = rp.block_map(parts, [b1], [[rp.identity_map(b1), None]], bsum, b1)
        pr2 = rp.block_map(parts, [b2], [[None, rp.identity_map(b2)]], bsum, b2)
        e1 = rp.compose(pr2, k, p)  # M -> B2
        e2 = rp.compose(pr1, k, p)  # M -> B1
        ids, alpha = self.decompose(m)
        inv = rp.invert(alpha, p)
        m1n, m2n = rp.compose(inv, m1, p), rp.compose(inv, m2, p)
        e1n, e2n = rp.compose(e1, alpha, p), rp.compose(e2, alpha, p)
        row = self.seq_triangle(ModSeq(s1.a_types, ids, s2.b_types, m1n, e1n))
        col = self.seq_triangle(ModSeq(s2.a_types, ids, s1.b_types, m2n, e2n))
        if not row.delta == act_right(d1, t2.g):
            raise BackendError("row of the shifted square has the wrong class")
        if not col.delta == act_right(d2, t1.g):
            raise BackendError("column of the shifted square has the wrong class")
        m_obj = self.obj_of(ids)
        m1_mor = self.map_to_mor(m1n, s1.a_types, ids)
        m2_mor = self.map_to_mor(m2n, s2.a_types, ids)
        lhs = (la.matmul(pushforward_matrix(m1_mor, d1.c_obj), d1.coords.reshape(-1, 1), p)
               + la.matmul(pushforward_matrix(m2_mor, d2.c_obj), d2.coords.reshape(-1, 1), p)) % p
        return ShiftedSquare(m_obj, m1_mor, m2_mor,
                             self.map_to_mor(e1n, ids, s2.b_types), self.map_to_mor(e2n, ids, s1.b_types),
                             t1, t2, row, col, not lhs.any())


def _residue_dim(comp, ident, top, hom_dim, i: int, p: int) -> int:
    """dim End(I_i) / rad, with rad = ker(top) certified to be a nil ideal."""
    h = int(hom_dim[i, i])
    t = top[i]
    if h == 0 or not t.any() or int(t @ ident[i]) % p != 1:
        return 0 if h == 0 else h
    ker = la.kernel_basis(t.reshape(1, -1), p)
    tens = comp[i, i, i]
    for c in range(ker.shape[1]):
        x = ker[:, c]
        # closed under products on both sides, and nilpotent
        for b in range(h):
            e = np.zeros(h, dtype=np.int64)
            e[b] = 1
            for prod in (np.einsum("a,b,abc->c", x, e, tens) % p, np.einsum("a,b,abc->c", e, x, tens) % p):
                if int(t @ prod) % p:
                    return h
        y = x.copy()
        for _ in range(h + 1):
            y = np.einsum("a,b,abc->c", y, x, tens) % p
        if y.any():
            return h
    return h - ker.shape[1]


def stable_complement(candidates: Sequence[np.ndarray], ideal: np.ndarray, p: int) -> list[int]:
    """Indices of candidates forming a basis of a complement to the row space ``ideal``."""
    chosen: list[int] = []
    current = ideal.copy()
    r = la.rank(current, p) if current.size else 0
    for k, v in enumerate(candidates):
        trial = np.concatenate([current, v.reshape(1, -1)]) if current.size else v.reshape(1, -1)
        r2 = la.rank(trial, p)
        if r2 > r:
            chosen.append(k)
            current, r = trial, r2
    return chosen


class CoordExtractor:
    """Coordinates in a chosen family of representatives, modulo an ideal."""

    def __init__(self, reps: Sequence[rp.RepMap], ideal: np.ndarray, ambient: int, p: int):
        self.p = p
        self.d = len(reps)
        cols = [f.vec() for f in reps] + [row for row in ideal]
        if cols:
            basis = np.stack(cols, axis=1) % p
            self.inv = la.left_inverse(basis, p)
            self.basis = basis
        else:
            self.inv = la.zeros(0, ambient)
            self.basis = la.zeros(ambient, 0)

    def __call__(self, f: rp.RepMap) -> np.ndarray:
        v = f.vec()
        if self.basis.shape[1] == 0:
            if v.any():
                raise BackendError("map lies outside the span of the known hom space")
            return np.zeros(0, dtype=np.int64)
        c = la.matmul(self.inv, v.reshape(-1, 1), self.p)[:, 0]
        if not np.array_equal(la.matmul(self.basis, c.reshape(-1, 1), self.p)[:, 0], v % self.p):
            raise BackendError("map lies outside the span of the known hom space")
        return c[:self.d]

"""mod of the path algebra of a type A_n quiver over F_p.

Indecomposables are the interval modules ``[a, b]`` (1-based).  Ext^1 is
computed from projective presentations ``0 -> K -> P_0 -> C -> 0`` as the
cokernel of ``Hom(P_0, A) -> Hom(K, A)``; a cocycle ``h: K -> A`` is realized
by the pushout ``B = coker(K -> A + P_0)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .. import linalg as la
from .. import reps as rp
from ..category import BasedCategory, ExtElem
from .base import BackendError, CoordExtractor, ModSeq, ModuleBackend, stable_complement


@dataclass(frozen=True)
class QuiverSpec:
    n: int
    orientation: str = ""
    p: int = 2

    def __post_init__(self):
        if not isinstance(self.n, int) or not 2 <= self.n <= 6:
            raise ValueError(f"quiver backend needs 2 <= n <= 6, got {self.n!r}")
        orient = self.orientation or "R" * (self.n - 1)
        if len(orient) != self.n - 1 or set(orient) - {"R", "L"}:
            raise ValueError(f"orientation must be {self.n - 1} letters from R/L, got {self.orientation!r}")
        object.__setattr__(self, "orientation", orient)
        la.FieldSpec(self.p)

    @property
    def arrows(self) -> tuple[tuple[int, int], ...]:
        return tuple((i, i + 1) if c == "R" else (i + 1, i) for i, c in enumerate(self.orientation))


@dataclass(frozen=True, eq=False)
class Presentation:
    p_types: tuple[int, ...]
    pi: rp.RepMap       # P -> C
    k_types: tuple[int, ...]
    iota: rp.RepMap     # K -> P


class QuiverBackend(ModuleBackend):
    def __init__(self, spec: QuiverSpec):
        super().__init__(rp.Quiver(spec.n, spec.arrows), spec.p)
        self.spec = spec
        n = spec.n
        self.intervals = sorted(((a, b) for a in range(1, n + 1) for b in range(a, n + 1)),
                                key=lambda ab: (ab[1] - ab[0], ab[0]))
        self.types = [self._interval(a, b) for a, b in self.intervals]
        self.tops = [self._top_at(a - 1) for a, _ in self.intervals]
        self.cat_of_type = list(range(len(self.types)))
        self.type_of_cat = list(range(len(self.types)))
        self._homs = {}
        self._pres: dict[tuple[int, ...], Presentation] = {}
        self._ext = {}

    def _interval(self, a: int, b: int) -> rp.Rep:
        dims = tuple(int(a <= v + 1 <= b) for v in range(self.spec.n))
        mats = tuple(np.ones((dims[t], dims[s]), dtype=np.int64) for s, t in self.quiver.arrows)
        return rp.Rep(self.quiver, dims, mats)

    @staticmethod
    def _top_at(v: int):
        return lambda f: int(f.comps[v][0, 0])

    def interval_id(self, a: int, b: int) -> int:
        return self.intervals.index((a, b))

    def projective_at(self, v: int) -> int:
        """Type id of the indecomposable projective at 0-based vertex ``v``."""
        reach = {v}
        frontier = [v]
        while frontier:
            u = frontier.pop()
            for s, t in self.quiver.arrows:
                if s == u and t not in reach:
                    reach.add(t)
                    frontier.append(t)
        return self.interval_id(min(reach) + 1, max(reach) + 1)

    # ------------------------------------------------------------------ homs
    def _hom(self, i: int, j: int):
        if (i, j) not in self._homs:
            m, n = self.types[i], self.types[j]
            basis = rp.hom_basis(m, n, self.p)
            self._homs[i, j] = (basis, CoordExtractor(basis, la.zeros(0, rp.hom_ambient_dim(m, n)),
                                                      rp.hom_ambient_dim(m, n), self.p))
        return self._homs[i, j]

    def hom_reps(self, i, j):
        return self._hom(i, j)[0]

    def hom_coords(self, i, j, f):
        return self._hom(i, j)[1](f)

    # ---------------------------------------------------------- presentations
    def presentation(self, c_types: tuple[int, ...]) -> Presentation:
        if c_types in self._pres:
            return self._pres[c_types]
        if len(c_types) != 1:
            parts = [self.presentation((k,)) for k in c_types]
            pt = sum((x.p_types for x in parts), ())
            kt = sum((x.k_types for x in parts), ())
            pstd, kstd, cstd = self.std(pt), self.std(kt), self.std(c_types)
            pparts = [self.std(x.p_types) for x in parts]
            kparts = [self.std(x.k_types) for x in parts]
            cparts = [self.types[k] for k in c_types]
            r = len(parts)
            pi = rp.block_map(pparts, cparts, [[parts[a].pi if a == b else None for b in range(r)]
                                               for a in range(r)], pstd, cstd)
            iota = rp.block_map(kparts, pparts, [[parts[a].iota if a == b else None for b in range(r)]
                                                 for a in range(r)], kstd, pstd)
            pres = Presentation(pt, pi, kt, iota)
        else:
            pres = self._indec_presentation(c_types[0])
        self._pres[c_types] = pres
        return pres

    def _indec_presentation(self, k: int) -> Presentation:
        c = self.types[k]
        p = self.p
        p_types: list[int] = []
        gens: list[rp.RepMap] = []
        for v in range(self.spec.n):
            if c.dims[v] == 0:
                continue
            incoming = [c.mats[a] for a, (s, t) in enumerate(self.quiver.arrows) if t == v and c.dims[s]]
            rad = (np.concatenate(incoming, axis=1) if incoming else la.zeros(c.dims[v], 0))
            ideal = rad.T % p if rad.size else la.zeros(0, c.dims[v])
            cands = list(la.identity(c.dims[v]))
            pv = self.projective_at(v)
            basis = rp.hom_basis(self.types[pv], c, p)
            evals = np.stack([f.comps[v][:, 0] for f in basis], axis=1) if basis else la.zeros(c.dims[v], 0)
            for idx in stable_complement(cands, ideal, p):
                coeffs = la.solve(evals, cands[idx], p)
                gens.append(rp.combine(coeffs, basis, self.types[pv], c, p))
                p_types.append(pv)
        pt = tuple(p_types)
        pstd = self.std(pt)
        pi = rp.block_map([self.types[x] for x in pt], [c], [gens], pstd, c)
        if not rp.is_surjective(pi, p):
            raise BackendError("projective cover is not surjective")
        kmod, incl = rp.kernel(pi, p)
        ids, alpha = self.decompose(kmod)
        return Presentation(pt, pi, ids, rp.compose(incl, alpha, p))

    # ------------------------------------------------------------------- ext
    def _ext_model(self, j: int, i: int):
        if (j, i) not in self._ext:
            pres = self.presentation((j,))
            kstd, pstd, a = self.std(pres.k_types), self.std(pres.p_types), self.types[i]
            amb = rp.hom_ambient_dim(kstd, a)
            hk = rp.hom_basis(kstd, a, self.p)
            img = [rp.compose(f, pres.iota, self.p).vec() for f in rp.hom_basis(pstd, a, self.p)]
            ideal_basis = la.Subspace.span(np.stack(img), self.p, amb).matrix if img else la.zeros(0, amb)
            chosen = stable_complement([f.vec() for f in hk], ideal_basis, self.p)
            reps = [hk[c] for c in chosen]
            self._ext[j, i] = (reps, CoordExtractor(reps, ideal_basis, amb, self.p))
        return self._ext[j, i]

    def ext_dim(self, j, i):
        return len(self._ext_model(j, i)[0])

    def ext_reps(self, j, i):
        return self._ext_model(j, i)[0]

    def ext_coords(self, j, i, h):
        return self._ext_model(j, i)[1](h)

    def left_action(self, j, i, i2):
        d1, d2 = self.ext_dim(j, i), self.ext_dim(j, i2)
        hom = self.hom_reps(i, i2)
        out = np.zeros((len(hom), d2, d1), dtype=np.int64)
        if d1 and d2:
            for k, a in enumerate(hom):
                for c, h in enumerate(self.ext_reps(j, i)):
                    out[k, :, c] = self.ext_coords(j, i2, rp.compose(a, h, self.p))
        return out

    def _lift_to_syzygy(self, c: rp.RepMap, j2: int, j: int) -> rp.RepMap:
        """``c_K: K_j2 -> K_j`` induced by ``c: I_j2 -> I_j`` on presentations."""
        p = self.p
        pr2, pr = self.presentation((j2,)), self.presentation((j,))
        p2std, pstd = self.std(pr2.p_types), self.std(pr.p_types)
        cp = rp.solve_map(p2std, pstd, [(pr.pi, None)], rp.compose(c, pr2.pi, p), p)
        k2std, kstd = self.std(pr2.k_types), self.std(pr.k_types)
        return rp.solve_map(k2std, kstd, [(pr.iota, None)], rp.compose(cp, pr2.iota, p), p)

    def right_action(self, j, j2, i):
        d1, d2 = self.ext_dim(j, i), self.ext_dim(j2, i)
        hom = self.hom_reps(j2, j)
        out = np.zeros((len(hom), d2, d1), dtype=np.int64)
        if d1 and d2:
            for k, c in enumerate(hom):
                ck = self._lift_to_syzygy(c, j2, j)
                for col, h in enumerate(self.ext_reps(j, i)):
                    out[k, :, col] = self.ext_coords(j2, i, rp.compose(h, ck, self.p))
        return out

    # -------------------------------------------------------------- triangles
    def _cocycle(self, d: ExtElem, pres: Presentation) -> rp.RepMap:
        p = self.p
        at, ct = self.types_of(d.a_obj), self.types_of(d.c_obj)
        kparts = [self.std(self.presentation((k,)).k_types) for k in ct]
        aparts = [self.types[k] for k in at]
        blocks = [[rp.combine(d.block(r, t), self.ext_reps(d.c_obj.summands[r], d.a_obj.summands[t]),
                              kparts[r], aparts[t], p) for r in range(len(ct))] for t in range(len(at))]
        return rp.block_map(kparts, aparts, blocks, self.std(pres.k_types), self.std(at))

    def realize_module(self, d):
        p = self.p
        at, ct = self.types_of(d.a_obj), self.types_of(d.c_obj)
        pres = self.presentation(ct)
        astd, pstd, kstd = self.std(at), self.std(pres.p_types), self.std(pres.k_types)
        h = self._cocycle(d, pres)
        qstd = self.std(at + pres.p_types)
        u = rp.block_map([kstd], [astd, pstd], [[h], [rp.scale(-1, pres.iota, p)]], kstd, qstd)
        b, q = rp.cokernel(u, p)
        incl = rp.block_map([astd], [astd, pstd], [[rp.identity_map(astd)], [None]], astd, qstd)
        f = rp.compose(q, incl, p)
        cstd = self.std(ct)
        rhs = rp.block_map([astd, pstd], [cstd], [[None, pres.pi]], qstd, cstd)
        g = rp.solve_map(b, cstd, [(None, q)], rhs, p)
        return b, f, g

    def classify(self, seq: ModSeq) -> ExtElem:
        p = self.p
        pres = self.presentation(seq.c_types)
        bstd, astd = seq.f.dst, self.std(seq.a_types)
        pstd, kstd = self.std(pres.p_types), self.std(pres.k_types)
        u = rp.solve_map(pstd, bstd, [(seq.g, None)], pres.pi, p)
        w = rp.compose(u, pres.iota, p)
        h = rp.solve_map(kstd, astd, [(seq.f, None)], w, p)
        kparts = [self.std(self.presentation((k,)).k_types) for k in seq.c_types]
        aparts = [self.types[k] for k in seq.a_types]
        c_obj, a_obj = self.obj_of(seq.c_types), self.obj_of(seq.a_types)
        out = self.cat.ext_elem(c_obj, a_obj)
        offs = out.offsets()
        for r, cr in enumerate(c_obj):
            for t, at in enumerate(a_obj):
                lo, hi = offs[r, t]
                out.coords[lo:hi] = self.ext_coords(cr, at, rp.sub_block(h, kparts, aparts, t, r))
        return out

    def make_epi(self, h, b_types, d_types):
        return (b_types, h) if rp.is_surjective(h, self.p) else None


def interval_name(a: int, b: int) -> str:
    return f"[{a},{b}]"


def build_quiver_category(spec: QuiverSpec) -> BasedCategory:
    be = QuiverBackend(spec)
    names, aliases = [], []
    proj = {be.projective_at(v): v + 1 for v in range(spec.n)}
    for k, (a, b) in enumerate(be.intervals):
        names.append(interval_name(a, b))
        al = []
        if a == b:
            al += [f"S{a}", f"S_{a}"]
        if k in proj:
            al += [f"P{proj[k]}", f"P_{proj[k]}"]
        aliases.append(tuple(al))
    label = f"quiverA n={spec.n} orientation={spec.orientation} p={spec.p}"
    cat = be.build(label, names, aliases)
    flagged = {x.id for x in cat.indecs if x.is_projective}
    if flagged != set(proj):
        raise BackendError("projectives found by E disagree with the projective covers")
    return cat

"""Defects of extensions and the Serre-set classification of closed subfunctors.

The contravariant defect of ``delta`` (realized by ``A -> B -g-> C``) is the
functor ``X -> coker(C(X, B) -> C(X, C))``; the covariant defect is
``X -> Im(C(A, X) -> E(C, X))``.  Every simple defect has a one-dimensional
value at a single non-projective indecomposable and zero elsewhere, so the
composition factors of a defect are read off its dimension vector.  A Serre
set is a set of non-projective indecomposables; it determines the Serre
subcategory of defects whose composition factors lie in it.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from . import linalg as la
from .category import (BasedCategory, CategoryError, ExtElem, Mor, Obj, Triangle, postcomp_matrix,
                       precomp_matrix, pullback_matrix, pushforward_matrix, realize, sharp_co,
                       sharp_contra)
from .relative import (HalfExactFunctor, Inapplicable, InternalConsistencyError, Subfunctor,
                       _checked, _subfunctor_from_predicate)


class NotADefect(CategoryError):
    pass


@dataclass(frozen=True, eq=False)
class FpFunctor:
    """A functor to vector spaces on the indecomposables.

    ``actions[i, j][k]`` is the image of the k-th basis map ``a: I_i -> I_j``;
    it is a ``dims[i] x dims[j]`` matrix for a contravariant functor and
    ``dims[j] x dims[i]`` for a covariant one.  ``embeddings`` optionally
    record each value as a subspace of an ambient space.
    """
    cat: BasedCategory
    dims: tuple[int, ...]
    actions: dict
    variance: str = "contra"
    embeddings: dict | None = field(default=None, repr=False)

    def dim_vector(self) -> dict[str, int]:
        return {self.cat.name(i): d for i, d in enumerate(self.dims)}

    def is_zero(self) -> bool:
        return not any(self.dims)

    def total_dim(self) -> int:
        return sum(self.dims)

    def functoriality_violations(self) -> list[str]:
        cat, p = self.cat, self.cat.p
        out = []
        for i, j, k in itertools.product(range(cat.n), repeat=3):
            for a in range(cat.hom_dim[i, j]):
                for b in range(cat.hom_dim[j, k]):
                    coords = cat.comp[i, j, k][a, b]
                    lhs = np.zeros_like(self._zero(i, k))
                    for c, x in enumerate(coords):
                        if x:
                            lhs = (lhs + int(x) * self.actions[i, k][c]) % p
                    fa, fb = self.actions[i, j][a], self.actions[j, k][b]
                    rhs = la.matmul(fa, fb, p) if self.variance == "contra" else la.matmul(fb, fa, p)
                    if not np.array_equal(lhs, rhs):
                        out.append(f"composition {cat.name(i)}->{cat.name(j)}->{cat.name(k)}")
        return out

    def _zero(self, i: int, j: int) -> np.ndarray:
        if self.variance == "contra":
            return la.zeros(self.dims[i], self.dims[j])
        return la.zeros(self.dims[j], self.dims[i])


@dataclass(frozen=True, eq=False)
class Defect:
    underlying: FpFunctor
    source: ExtElem
    triangle: Triangle


@dataclass(frozen=True)
class SerreSet:
    members: frozenset

    @classmethod
    def of(cls, cat: BasedCategory, members: Iterable) -> "SerreSet":
        ids = frozenset(cat.index(x) if isinstance(x, str) else int(x) for x in members)
        bad = ids - set(cat.non_projectives)
        if bad:
            raise CategoryError(f"Serre sets contain only non-projectives; got {sorted(bad)}")
        return cls(ids)

    def sorted(self) -> tuple[int, ...]:
        return tuple(sorted(self.members))

    def label(self, cat: BasedCategory) -> str:
        return "{" + ",".join(cat.name(i) for i in self.sorted()) + "}"


def all_serre_sets(cat: BasedCategory) -> list[SerreSet]:
    nonproj = cat.non_projectives
    return [SerreSet(frozenset(c)) for k in range(len(nonproj) + 1)
            for c in itertools.combinations(nonproj, k)]


# ---------------------------------------------------------------------------
# quotient functors from linear data


def _quotient_functor(cat: BasedCategory, maps: dict, sub: dict, variance: str) -> FpFunctor:
    """``X -> V_X / U_X`` with actions induced from ambient matrices.

    ``maps[i, j][k]`` acts on the ambient spaces, ``sub[i]`` is a matrix whose
    columns span ``U_i`` inside ``V_i``.
    """
    p = cat.p
    proj, sec = {}, {}
    for i in range(cat.n):
        q, _ = la.cokernel(sub[i], p) if sub[i].shape[1] else (la.identity(sub[i].shape[0]), 0)
        proj[i] = q
        sec[i] = la.right_inverse(q, p) if q.shape[0] else la.zeros(q.shape[1], 0)
    dims = tuple(int(proj[i].shape[0]) for i in range(cat.n))
    actions = {}
    for i, j in cat.pairs():
        mats = []
        for m in maps[i, j]:
            if variance == "contra":   # V_j -> V_i
                mats.append(la.matmul(la.matmul(proj[i], m, p), sec[j], p))
            else:                      # V_i -> V_j
                mats.append(la.matmul(la.matmul(proj[j], m, p), sec[i], p))
        actions[i, j] = mats
    return FpFunctor(cat, dims, actions, variance)


def _sub_functor(cat: BasedCategory, maps: dict, sub: dict, variance: str) -> FpFunctor:
    """``X -> U_X`` for subspaces ``U_X`` stable under ambient matrices."""
    p = cat.p
    bases = {}
    for i in range(cat.n):
        s = la.image(sub[i], p) if sub[i].size else la.Subspace.zero(sub[i].shape[0], p)
        bases[i] = s.matrix.T
    dims = tuple(int(bases[i].shape[1]) for i in range(cat.n))
    actions = {}
    for i, j in cat.pairs():
        mats = []
        for m in maps[i, j]:
            src, dst = (bases[j], bases[i]) if variance == "contra" else (bases[i], bases[j])
            if src.shape[1] == 0 or dst.shape[1] == 0:
                mats.append(la.zeros(dst.shape[1], src.shape[1]))
                continue
            img = la.matmul(m, src, p)
            try:
                mats.append(la.solve(dst, img, p))
            except la.NoSolution as exc:
                raise InternalConsistencyError("subfunctor is not stable under the action") from exc
        actions[i, j] = mats
    emb = {i: la.Subspace.span(bases[i].T, p, bases[i].shape[0]) for i in range(cat.n)}
    return FpFunctor(cat, dims, actions, variance, emb)


def _basis_maps(cat: BasedCategory, i: int, j: int) -> list[Mor]:
    return [cat.basis_map(i, j, k) for k in range(cat.hom_dim[i, j])]


# ---------------------------------------------------------------------------
# defects


def defect_of(d: ExtElem, triangle: Triangle | None = None) -> Defect:
    """``delta^*``: ``X -> coker(C(X, B) -> C(X, C))``."""
    cat = d.cat
    t = triangle if triangle is not None else realize(d)
    c = t.c
    maps = {(i, j): [precomp_matrix(a, c) for a in _basis_maps(cat, i, j)] for i, j in cat.pairs()}
    sub = {i: postcomp_matrix(t.g, Obj.of(i)) for i in range(cat.n)}
    return Defect(_quotient_functor(cat, maps, sub, "contra"), d, t)


def co_defect_of(d: ExtElem) -> FpFunctor:
    """``delta_*``: ``X -> Im(C(A, X) -> E(C, X))``."""
    cat = d.cat
    maps = {(i, j): [pushforward_matrix(a, d.c_obj) for a in _basis_maps(cat, i, j)] for i, j in cat.pairs()}
    sub = {i: sharp_co(d, i) for i in range(cat.n)}
    return _sub_functor(cat, maps, sub, "co")


def contra_image_functor(d: ExtElem) -> FpFunctor:
    """``X -> Im((delta_sharp)_X) inside E(X, A)``; isomorphic to ``delta^*``."""
    cat = d.cat
    maps = {(i, j): [pullback_matrix(a, d.a_obj) for a in _basis_maps(cat, i, j)] for i, j in cat.pairs()}
    sub = {i: sharp_contra(d, i) for i in range(cat.n)}
    return _sub_functor(cat, maps, sub, "contra")


def _kernel_cols(m: np.ndarray, p: int) -> np.ndarray:
    return la.kernel_basis(m, p) if m.shape[1] else la.zeros(0, 0)


def duality_d(f: Defect) -> FpFunctor:
    """The dual of ``delta^*`` from its presentation: ``X -> ker(E(C, X) -> E(B, X))``."""
    cat, t = f.source.cat, f.triangle
    c = t.c
    maps = {(i, j): [pushforward_matrix(a, c) for a in _basis_maps(cat, i, j)] for i, j in cat.pairs()}
    sub = {i: _kernel_cols(pullback_matrix(t.g, Obj.of(i)), cat.p) for i in range(cat.n)}
    out = _sub_functor(cat, maps, sub, "co")
    ref = co_defect_of(f.source)
    if not same_embedded(out, ref):
        raise InternalConsistencyError("dual of the defect differs from the covariant defect")
    return out


def dual_back_dims(d: ExtElem) -> tuple[int, ...]:
    """Dimension vector of the quasi-inverse applied to the covariant defect of ``d``.

    Computed as ``X -> ker(E(X, A) -> E(X, B))`` from the inflation.
    """
    cat = d.cat
    t = realize(d)
    out = []
    for i in range(cat.n):
        m = pushforward_matrix(t.f, Obj.of(i))
        out.append(m.shape[1] - (la.rank(m, cat.p) if m.size else 0))
    return tuple(out)


def same_embedded(f: FpFunctor, g: FpFunctor) -> bool:
    """Equal values as subspaces of the same ambient, and equal actions on them."""
    if f.embeddings is None or g.embeddings is None or f.dims != g.dims:
        return False
    if any(f.embeddings[i] != g.embeddings[i] for i in f.embeddings):
        return False
    return all(all(np.array_equal(a, b) for a, b in zip(f.actions[k], g.actions[k])) for k in f.actions)


def gamma(cat: BasedCategory, x: Obj | int) -> FpFunctor:
    """``Y -> C(Y, X)`` modulo maps factoring through projectives."""
    x = Obj.of(x) if isinstance(x, (int, np.integer)) else x
    maps = {(i, j): [precomp_matrix(a, x) for a in _basis_maps(cat, i, j)] for i, j in cat.pairs()}
    sub = {i: projective_ideal(cat, Obj.of(i), x) for i in range(cat.n)}
    return _quotient_functor(cat, maps, sub, "contra")


def projective_ideal(cat: BasedCategory, y: Obj, x: Obj) -> np.ndarray:
    """Columns spanning the maps ``Y -> X`` that factor through a projective."""
    key = ("proj_ideal", y, x)
    if key in cat.cache:
        return cat.cache[key]
    cols = []
    for q in cat.projectives:
        qo = Obj.of(q)
        for b in cat.hom_basis(qo, x):
            post = postcomp_matrix(b, y)  # C(Y, Q) -> C(Y, X)
            for c in range(post.shape[1]):
                cols.append(post[:, c])
    dim = cat.hom_dim_obj(y, x)
    out = np.stack(cols, axis=1) % cat.p if cols else la.zeros(dim, 0)
    cat.cache[key] = out
    return out


def stable_hom_dim(cat: BasedCategory, y: int, x: int) -> int:
    ideal = projective_ideal(cat, Obj.of(y), Obj.of(x))
    return int(cat.hom_dim[y, x]) - (la.rank(ideal, cat.p) if ideal.size else 0)


# ---------------------------------------------------------------------------
# composition factors and Serre sets


def composition_factors(f: FpFunctor) -> dict[int, int]:
    cat = f.cat
    for q in cat.projectives:
        if f.dims[q]:
            raise NotADefect(f"functor does not vanish at the projective {cat.name(q)}")
    return {i: f.dims[i] for i in cat.non_projectives if f.dims[i]}


def defect_dims(d: ExtElem) -> tuple[int, ...]:
    """Dimension vector of ``delta^*`` via ranks of ``(delta_sharp)_X``."""
    cat = d.cat
    return tuple(la.rank(m, cat.p) if m.size else 0 for m in (sharp_contra(d, i) for i in range(cat.n)))


def serre_to_subfunctor(cat: BasedCategory, s: SerreSet | Iterable) -> Subfunctor:
    """``F(S)``: extensions whose defect has all composition factors in ``S``."""
    s = s if isinstance(s, SerreSet) else SerreSet.of(cat, s)
    key = ("serre", s.members)
    if key not in cat.cache:
        outside = [x for x in range(cat.n) if x not in s.members]

        def pred(d):
            dims = defect_dims(d)
            return all(dims[x] == 0 for x in outside)
        cat.cache[key] = _subfunctor_from_predicate(cat, pred, f"F({s.label(cat)})")
    return cat.cache[key]


def support(f: Subfunctor) -> SerreSet:
    """Union of the composition factors of the defects of a spanning set of ``F``."""
    cat = f.cat
    out = set()
    for (j, i), space in f.spaces.items():
        for v in space.basis:
            dims = defect_dims(cat.ext_elem(Obj.of(j), Obj.of(i), v))
            out.update(x for x in range(cat.n) if dims[x])
    return SerreSet.of(cat, out)


def subfunctor_to_serre(f: Subfunctor) -> SerreSet:
    s = support(f)
    if serre_to_subfunctor(f.cat, s) != f:
        raise Inapplicable("subfunctor is not closed; its defects do not form a Serre subcategory")
    return s


@dataclass(frozen=True, eq=False)
class ClosedEntry:
    serre: SerreSet
    subfunctor: Subfunctor


def enumerate_closed(cat: BasedCategory, check: bool = True, bound: int = 3) -> list[ClosedEntry]:
    from .relative import is_closed
    out = [ClosedEntry(s, serre_to_subfunctor(cat, s)) for s in all_serre_sets(cat)]
    if len({e.subfunctor for e in out}) != len(out):
        raise InternalConsistencyError("distinct Serre sets give the same subfunctor")
    if check:
        for e in out:
            if not is_closed(e.subfunctor, bound):
                raise InternalConsistencyError(f"F({e.serre.label(cat)}) is not closed")
    return out


def covering_edges(entries: list[ClosedEntry]) -> list[tuple[int, int]]:
    """Hasse diagram of the inclusion order (indices into ``entries``)."""
    n = len(entries)
    less = [[a != b and entries[a].subfunctor <= entries[b].subfunctor for b in range(n)] for a in range(n)]
    edges = []
    for a in range(n):
        for b in range(n):
            if less[a][b] and not any(less[a][c] and less[c][b] for c in range(n)):
                edges.append((a, b))
    return edges


# ---------------------------------------------------------------------------
# projectivization and the lifted functor


def projectivization(cat: BasedCategory, s: SerreSet | Iterable) -> HalfExactFunctor:
    """``X -> (stable C(Y, X))_{Y}`` over non-projective ``Y`` outside ``S``."""
    s = s if isinstance(s, SerreSet) else SerreSet.of(cat, s)
    key = ("projectivization", s.members)
    if key in cat.cache:
        return cat.cache[key]
    p = cat.p
    ys = [y for y in cat.non_projectives if y not in s.members]
    proj, sec = {}, {}
    for y in ys:
        for i in range(cat.n):
            ideal = projective_ideal(cat, Obj.of(y), Obj.of(i))
            q = la.cokernel(ideal, p)[0] if ideal.shape[1] else la.identity(ideal.shape[0])
            proj[y, i] = q
            sec[y, i] = la.right_inverse(q, p) if q.shape[0] else la.zeros(q.shape[1], 0)
    dims = tuple(sum(proj[y, i].shape[0] for y in ys) for i in range(cat.n))
    maps = {}
    for i, j in cat.pairs():
        mats = []
        for a in _basis_maps(cat, i, j):
            blocks = [[la.matmul(la.matmul(proj[y, j], postcomp_matrix(a, Obj.of(y)), p), sec[y, i], p)
                       if y == y2 else None for y2 in ys] for y in ys]
            mats.append(la.block_matrix(blocks, [proj[y, j].shape[0] for y in ys],
                                        [proj[y, i].shape[0] for y in ys]))
        maps[i, j] = mats
    h = _checked(HalfExactFunctor(cat, dims, maps, "co", "H_" + s.label(cat)))
    for q in cat.projectives:
        if h.dims[q]:
            raise InternalConsistencyError("projectivization does not vanish on projectives")
    cat.cache[key] = h
    return h


def lift_h(h: HalfExactFunctor, f: Defect) -> int:
    """``dim Ĥ`` of the defect: ``coker H(g)``; for contravariant ``H``, ``coker H(f)``."""
    m = h.right_piece(f.triangle)
    return m.shape[0] - (la.rank(m, h.cat.p) if m.size else 0)


def lift_h_map(h: HalfExactFunctor, t: Triangle, t2: Triangle, c: Mor) -> np.ndarray:
    """The map ``coker H(g) -> coker H(g2)`` induced by ``c`` when ``g2 b = c g`` for some ``b``."""
    if h.variance != "co":
        raise CategoryError("lift_h_map is implemented for covariant functors")
    p = h.cat.p
    q1, _ = la.cokernel(h.on_mor(t.g), p)
    q2, _ = la.cokernel(h.on_mor(t2.g), p)
    s1 = la.right_inverse(q1, p) if q1.shape[0] else la.zeros(q1.shape[1], 0)
    hc = h.on_mor(c)
    out = la.matmul(la.matmul(q2, hc, p), s1, p)
    # well defined: H(c) maps the image of H(g) into the image of H(g2)
    img = la.matmul(la.matmul(q2, hc, p), h.on_mor(t.g), p)
    if img.size and img.any():
        raise InternalConsistencyError("induced map on cokernels is not well defined")
    return out


def simple_defects(cat: BasedCategory) -> dict[int, ExtElem]:
    """For each non-projective X an extension whose defect is the simple at X."""
    out = {}
    for x in cat.non_projectives:
        for a in range(cat.n):
            for e in cat.ext_elements(Obj.of(x), Obj.of(a)):
                if e.is_zero():
                    continue
                dims = defect_dims(e)
                if dims[x] == 1 and sum(dims) == 1:
                    out[x] = e
                    break
            if x in out:
                break
    return out


def lifted_dims_by_factors(h: HalfExactFunctor, d: ExtElem, simples: dict[int, ExtElem]) -> int:
    """``dim Ĥ(delta^*)`` predicted from composition factors and the simple values."""
    facts = composition_factors(defect_of(d).underlying)
    return sum(m * lift_h(h, defect_of(simples[x])) for x, m in facts.items())

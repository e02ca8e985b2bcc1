"""Additive subfunctors of E and the relative structures cut out by functors.

A :class:`Subfunctor` is a family of subspaces ``F(I_j, I_i)`` of the
extension spaces, closed under the left and right actions of morphisms.  The
subfunctors ``E_R^H`` and ``E_L^H`` of a half exact functor ``H`` collect the
extensions whose deflation (inflation) ``H`` sends to an epimorphism
(monomorphism).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from . import linalg as la
from .category import (BasedCategory, CategoryError, ExtElem, Mor, Obj, act_left, act_right,
                       compose, deflation_completion, is_epi, is_mono, realize, sharp_co,
                       sharp_contra)


class InternalConsistencyError(RuntimeError):
    """A computed object violates a statement the theory guarantees."""


class NotHalfExact(CategoryError):
    pass


@dataclass(frozen=True, eq=False)
class Subfunctor:
    cat: BasedCategory
    spaces: dict

    @classmethod
    def zero(cls, cat: BasedCategory) -> "Subfunctor":
        return cls(cat, {(j, i): la.Subspace.zero(cat.ext_dim(j, i), cat.p) for j, i in cat.pairs()})

    @classmethod
    def full(cls, cat: BasedCategory) -> "Subfunctor":
        return cls(cat, {(j, i): la.Subspace.full(cat.ext_dim(j, i), cat.p) for j, i in cat.pairs()})

    @classmethod
    def from_bases(cls, cat: BasedCategory, bases: dict) -> "Subfunctor":
        spaces = {}
        for j, i in cat.pairs():
            vs = bases.get((j, i), [])
            spaces[j, i] = la.span_of(vs, cat.p, cat.ext_dim(j, i))
        return cls(cat, spaces)

    def key(self) -> tuple:
        return tuple(self.spaces[ji].basis for ji in sorted(self.spaces))

    def __eq__(self, other) -> bool:
        return isinstance(other, Subfunctor) and self.cat is other.cat and self.key() == other.key()

    def __hash__(self) -> int:
        return hash(self.key())

    def __le__(self, other: "Subfunctor") -> bool:
        return all(other.spaces[ji].contains(self.spaces[ji]) for ji in self.spaces)

    def dims(self) -> dict:
        return {ji: s.dim for ji, s in self.spaces.items()}

    def total_dim(self) -> int:
        return sum(s.dim for s in self.spaces.values())

    def contains(self, d: ExtElem) -> bool:
        for r, cr in enumerate(d.c_obj):
            for t, at in enumerate(d.a_obj):
                if not self.spaces[cr, at].contains_vector(d.block(r, t)):
                    return False
        return True

    def is_zero(self) -> bool:
        return all(s.dim == 0 for s in self.spaces.values())


def _ext(cat: BasedCategory, j: int, i: int, v) -> ExtElem:
    return cat.ext_elem(Obj.of(j), Obj.of(i), v)


@dataclass
class SubfunctorReport:
    violations: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def validate_subfunctor(f: Subfunctor) -> SubfunctorReport:
    """Check stability of every space under the actions of hom basis elements."""
    cat = f.cat
    rep = SubfunctorReport()
    for (j, i), space in f.spaces.items():
        if space.ambient_dim != cat.ext_dim(j, i):
            rep.violations.append(f"space at ({cat.name(j)},{cat.name(i)}) has the wrong ambient")
            continue
        for v in space.basis:
            d = _ext(cat, j, i, v)
            for i2 in range(cat.n):
                for k in range(cat.hom_dim[i, i2]):
                    if not f.spaces[j, i2].contains_vector(act_left(cat.basis_map(i, i2, k), d).coords):
                        rep.violations.append(
                            f"left action {cat.name(i)}->{cat.name(i2)} leaves F at ({cat.name(j)},{cat.name(i)})")
            for j2 in range(cat.n):
                for k in range(cat.hom_dim[j2, j]):
                    if not f.spaces[j2, i].contains_vector(act_right(d, cat.basis_map(j2, j, k)).coords):
                        rep.violations.append(
                            f"right action {cat.name(j2)}->{cat.name(j)} leaves F at ({cat.name(j)},{cat.name(i)})")
    return rep


def closure(cat: BasedCategory, generators: Iterable[ExtElem]) -> Subfunctor:
    """The smallest additive subfunctor containing the generators."""
    vecs: dict = {ji: [] for ji in cat.pairs()}
    for d in generators:
        for r, cr in enumerate(d.c_obj):
            for t, at in enumerate(d.a_obj):
                vecs[cr, at].append(d.block(r, t))
    f = Subfunctor.from_bases(cat, vecs)
    while True:
        grown = {ji: list(s.basis) for ji, s in f.spaces.items()}
        for (j, i), space in f.spaces.items():
            for v in space.basis:
                d = _ext(cat, j, i, v)
                for i2 in range(cat.n):
                    for k in range(cat.hom_dim[i, i2]):
                        grown[j, i2].append(act_left(cat.basis_map(i, i2, k), d).coords)
                for j2 in range(cat.n):
                    for k in range(cat.hom_dim[j2, j]):
                        grown[j2, i].append(act_right(d, cat.basis_map(j2, j, k)).coords)
        g = Subfunctor.from_bases(cat, grown)
        if g == f:
            return f
        f = g


def intersect(f: Subfunctor, g: Subfunctor) -> Subfunctor:
    if f.cat is not g.cat:
        raise CategoryError("subfunctors of different categories")
    out = Subfunctor(f.cat, {ji: f.spaces[ji].intersect(g.spaces[ji]) for ji in f.spaces})
    rep = validate_subfunctor(out)
    if not rep.ok:
        raise InternalConsistencyError("intersection of subfunctors is not a subfunctor")
    return out


# ---------------------------------------------------------------------------
# half exact functors


@dataclass(frozen=True, eq=False)
class HalfExactFunctor:
    """An additive functor to vector spaces given on indecomposables and hom bases.

    ``maps[i, j][k]`` is the image of the k-th basis morphism ``I_i -> I_j``:
    a ``dims[j] x dims[i]`` matrix when covariant, ``dims[i] x dims[j]`` when
    contravariant.
    """
    cat: BasedCategory
    dims: tuple[int, ...]
    maps: dict
    variance: str = "co"
    tag: str = ""

    def value_dim(self, x: Obj) -> int:
        return sum(self.dims[i] for i in x)

    def on_mor(self, f: Mor) -> np.ndarray:
        cat = self.cat
        src = [self.dims[i] for i in f.src]
        dst = [self.dims[i] for i in f.dst]
        blocks = [[None] * len(f.src) for _ in f.dst]
        for t, y in enumerate(f.dst):
            for s, x in enumerate(f.src):
                acc = np.zeros((self.dims[y], self.dims[x]) if self.variance == "co"
                               else (self.dims[x], self.dims[y]), dtype=np.int64)
                for k, c in enumerate(f.blocks[t][s]):
                    if c:
                        acc = acc + int(c) * self.maps[x, y][k]
                blocks[t][s] = acc % cat.p
        if self.variance == "co":
            return la.block_matrix(blocks, dst, src)
        return la.block_matrix([[blocks[t][s] for t in range(len(dst))] for s in range(len(src))],
                               src, dst)

    # exactness tests on a triangle A -f-> B -g-> C
    def right_piece(self, t) -> np.ndarray:
        """The map whose surjectivity defines ``E_R^H``: ``H(g)`` or, contravariantly, ``H(f)``."""
        return self.on_mor(t.g if self.variance == "co" else t.f)

    def left_piece(self, t) -> np.ndarray:
        return self.on_mor(t.f if self.variance == "co" else t.g)


def _is_surj(m: np.ndarray, p: int) -> bool:
    return m.shape[0] == 0 or la.rank(m, p) == m.shape[0]


def _is_inj(m: np.ndarray, p: int) -> bool:
    return m.shape[1] == 0 or la.rank(m, p) == m.shape[1]


def functor_violations(h: HalfExactFunctor, exhaustive_cap: int = 64) -> list[str]:
    """Functoriality on basis composites and half exactness on extensions."""
    cat, p = h.cat, h.cat.p
    out = []
    for i in range(cat.n):
        if not np.array_equal(h.on_mor(Mor.identity(cat, Obj.of(i))), la.identity(h.dims[i])):
            out.append(f"H(id_{cat.name(i)}) is not the identity")
    for i, j, k in itertools.product(range(cat.n), repeat=3):
        for a in range(cat.hom_dim[i, j]):
            fa = cat.basis_map(i, j, a)
            for b in range(cat.hom_dim[j, k]):
                fb = cat.basis_map(j, k, b)
                lhs = h.on_mor(compose(fb, fa))
                ha, hb = h.on_mor(fa), h.on_mor(fb)
                rhs = la.matmul(hb, ha, p) if h.variance == "co" else la.matmul(ha, hb, p)
                if not np.array_equal(lhs, rhs):
                    out.append(f"H fails on {cat.name(i)}->{cat.name(j)}->{cat.name(k)}")
    for j, i in cat.ext_pairs():
        d = cat.ext_dim(j, i)
        elems = (cat.ext_elements(Obj.of(j), Obj.of(i)) if p ** d <= exhaustive_cap
                 else iter(cat.ext_basis(j, i)))
        for e in elems:
            t = realize(e)
            hf, hg = h.on_mor(t.f), h.on_mor(t.g)
            first, second = (hf, hg) if h.variance == "co" else (hg, hf)
            if not _exact_pair(first, second, p):
                out.append(f"H not exact at the middle of a triangle in E({cat.name(j)},{cat.name(i)})")
    return out


def _exact_pair(a: np.ndarray, b: np.ndarray, p: int) -> bool:
    if a.size and b.size and la.matmul(b, a, p).any():
        return False
    ra = la.rank(a, p) if a.size else 0
    rb = la.rank(b, p) if b.size else 0
    return ra == b.shape[1] - rb


def _checked(h: HalfExactFunctor) -> HalfExactFunctor:
    bad = functor_violations(h)
    if bad:
        raise NotHalfExact(f"{h.tag}: {bad[0]}")
    return h


def _as_ids(cat: BasedCategory, d: Iterable) -> list[int]:
    out = []
    for x in d:
        if isinstance(x, Obj):
            out.extend(x.summands)
        elif isinstance(x, str):
            out.append(cat.index(x))
        else:
            out.append(int(x))
    return sorted(set(out))


def restricted_yoneda(cat: BasedCategory, d: Iterable) -> HalfExactFunctor:
    """``X -> (C(D, X))_{D in d}``, covariant."""
    ds = _as_ids(cat, d)
    dims = tuple(int(sum(cat.hom_dim[x, i] for x in ds)) for i in range(cat.n))
    maps = {}
    from .category import postcomp_matrix
    src = Obj(tuple(ds))
    for i, j in cat.pairs():
        maps[i, j] = [postcomp_matrix(cat.basis_map(i, j, k), src) for k in range(cat.hom_dim[i, j])]
    return _checked(HalfExactFunctor(cat, dims, maps, "co", "Y_{" + ",".join(cat.name(x) for x in ds) + "}"))


def restricted_coyoneda(cat: BasedCategory, d: Iterable) -> HalfExactFunctor:
    """``X -> (C(X, D))_{D in d}``, contravariant."""
    ds = _as_ids(cat, d)
    dims = tuple(int(sum(cat.hom_dim[i, x] for x in ds)) for i in range(cat.n))
    maps = {}
    from .category import precomp_matrix
    dst = Obj(tuple(ds))
    for i, j in cat.pairs():
        maps[i, j] = [precomp_matrix(cat.basis_map(i, j, k), dst) for k in range(cat.hom_dim[i, j])]
    return _checked(HalfExactFunctor(cat, dims, maps, "contra", "Y^{" + ",".join(cat.name(x) for x in ds) + "}"))


def zero_functor(cat: BasedCategory, variance: str = "co") -> HalfExactFunctor:
    maps = {(i, j): [la.zeros(0, 0)] * int(cat.hom_dim[i, j]) for i, j in cat.pairs()}
    return HalfExactFunctor(cat, (0,) * cat.n, maps, variance, "0")


def compose_shift(h: HalfExactFunctor, i: int) -> HalfExactFunctor:
    """``H o Sigma^i``."""
    cat = h.cat
    if cat.suspension is None or cat.suspension_hom is None:
        raise CategoryError("this category has no suspension functor")
    cur = h
    steps = i % _susp_order(cat)
    for _ in range(steps):
        s = cat.suspension
        dims = tuple(cur.dims[s[x]] for x in range(cat.n))
        maps = {}
        for x, y in cat.pairs():
            sh = cat.suspension_hom[x, y]
            base = cur.maps[s[x], s[y]]
            shape = ((dims[y], dims[x]) if cur.variance == "co" else (dims[x], dims[y]))
            col = []
            for k in range(cat.hom_dim[x, y]):
                acc = np.zeros(shape, dtype=np.int64)
                for k2 in range(sh.shape[0]):
                    if sh[k2, k]:
                        acc = acc + int(sh[k2, k]) * base[k2]
                col.append(acc % cat.p)
            maps[x, y] = col
        cur = HalfExactFunctor(cat, dims, maps, cur.variance, f"{h.tag}∘Σ^{i}")
    return _checked(cur) if steps else h


def _susp_order(cat: BasedCategory) -> int:
    s = list(cat.suspension)
    k, cur = 1, s
    while cur != list(range(len(s))):
        cur = [s[x] for x in cur]
        k += 1
    return k


# ---------------------------------------------------------------------------
# subfunctors from elementwise predicates


def _subfunctor_from_predicate(cat: BasedCategory, pred, what: str) -> Subfunctor:
    spaces = {}
    for j, i in cat.pairs():
        d = cat.ext_dim(j, i)
        members = [e.coords for e in cat.ext_elements(Obj.of(j), Obj.of(i)) if pred(e)]
        space = la.span_of(members, cat.p, d)
        if len(members) != cat.p ** space.dim:
            raise InternalConsistencyError(
                f"{what}: members in E({cat.name(j)},{cat.name(i)}) do not form a subspace")
        spaces[j, i] = space
    out = Subfunctor(cat, spaces)
    if not validate_subfunctor(out).ok:
        raise InternalConsistencyError(f"{what} is not stable under the actions")
    return out


def h_epi_on(h: HalfExactFunctor, d: ExtElem) -> bool:
    return _is_surj(h.right_piece(realize(d)), h.cat.p)


def h_mono_on(h: HalfExactFunctor, d: ExtElem) -> bool:
    return _is_inj(h.left_piece(realize(d)), h.cat.p)


def e_r(cat: BasedCategory, h: HalfExactFunctor) -> Subfunctor:
    key = ("e_r", id(h))
    if key not in cat.cache:
        cat.cache[key] = (h, _subfunctor_from_predicate(cat, lambda d: h_epi_on(h, d), f"E_R^{h.tag}"))
    return cat.cache[key][1]


def e_l(cat: BasedCategory, h: HalfExactFunctor) -> Subfunctor:
    key = ("e_l", id(h))
    if key not in cat.cache:
        cat.cache[key] = (h, _subfunctor_from_predicate(cat, lambda d: h_mono_on(h, d), f"E_L^{h.tag}"))
    return cat.cache[key][1]


def _kernel_subfunctor(cat: BasedCategory, sharp, d_ids: list[int]) -> Subfunctor:
    spaces = {}
    for j, i in cat.pairs():
        dim = cat.ext_dim(j, i)
        rows = []
        for e in cat.ext_basis(j, i):
            rows.append(np.concatenate([sharp(e, x).reshape(-1) for x in d_ids])
                        if d_ids else np.zeros(0, dtype=np.int64))
        if dim == 0:
            spaces[j, i] = la.Subspace.zero(0, cat.p)
            continue
        m = np.stack(rows, axis=1)
        spaces[j, i] = la.kernel(m, cat.p) if m.shape[0] else la.Subspace.full(dim, cat.p)
    return Subfunctor(cat, spaces)


def e_d(cat: BasedCategory, d: Iterable) -> Subfunctor:
    """``E_D``: extensions with ``(delta_sharp)_X = 0`` on every summand X of ``d``."""
    return _kernel_subfunctor(cat, sharp_contra, _as_ids(cat, d))


def e_upper_d(cat: BasedCategory, d: Iterable) -> Subfunctor:
    """``E^D``: extensions with ``(delta^sharp)^X = 0`` on every summand X of ``d``."""
    return _kernel_subfunctor(cat, sharp_co, _as_ids(cat, d))


def e_exact(cat: BasedCategory) -> Subfunctor:
    def pred(d):
        t = realize(d)
        return is_mono(t.f) and is_epi(t.g)
    return _subfunctor_from_predicate(cat, pred, "E^ex")


def proper_class_from_homological(cat: BasedCategory, h: HalfExactFunctor) -> Subfunctor:
    """Intersection of ``E_R`` and ``E_L`` of every shift ``H o Sigma^i``."""
    if cat.suspension is None:
        raise CategoryError("this category has no suspension functor")
    out = Subfunctor.full(cat)
    for i in range(_susp_order(cat)):
        hi = compose_shift(h, i)
        out = intersect(out, intersect(e_r(cat, hi), e_l(cat, hi)))
    return out


def shift_intersections(cat: BasedCategory, h: HalfExactFunctor, upto: int) -> list[Subfunctor]:
    """Partial intersections over ``i = 0..k`` for ``k < upto``."""
    out = []
    acc = Subfunctor.full(cat)
    for i in range(upto):
        hi = compose_shift(h, i)
        acc = intersect(acc, intersect(e_r(cat, hi), e_l(cat, hi)))
        out.append(acc)
    return out


class Inapplicable(CategoryError):
    pass


def maximality_check(f_closed: Subfunctor, h: HalfExactFunctor) -> bool:
    """For closed ``F`` on which ``H`` is right exact, ``F`` lies inside ``E_R^H``."""
    cat = f_closed.cat
    for (j, i), space in f_closed.spaces.items():
        for v in space.elements():
            if not h_epi_on(h, _ext(cat, j, i, v)):
                raise Inapplicable("H is not right exact on F")
    return f_closed <= e_r(cat, h)


# ---------------------------------------------------------------------------
# closedness


@dataclass(frozen=True)
class CompositionWitness:
    outer: ExtElem   # class of the triangle whose deflation is h: C -> D
    inner: ExtElem   # class of the triangle whose deflation is g: B -> C
    composite: ExtElem  # class of a triangle with deflation h o g


def composition_instances(cat: BasedCategory, bound: int = 3) -> list[CompositionWitness]:
    """Triples (outer, inner, composite) over indecomposable ends.

    ``outer`` runs over E(I_d, I_a); its middle term ``C`` (at most ``bound``
    summands) receives every ``inner`` in E(C, I_a2), and ``composite`` is the
    class of the completed deflation of ``h o g``.
    """
    key = ("composition_instances", bound)
    if key in cat.cache:
        return cat.cache[key]
    out = []
    for dd, a in cat.pairs():
        for outer in cat.ext_elements(Obj.of(dd), Obj.of(a)):
            t_out = realize(outer)
            c = t_out.b
            if len(c) > bound or c.is_zero:
                continue
            for a2 in range(cat.n):
                for inner in cat.ext_elements(c, Obj.of(a2)):
                    t_in = realize(inner)
                    comp = deflation_completion(compose(t_out.g, t_in.g))
                    if comp is None:
                        raise InternalConsistencyError("composite of deflations is not a deflation")
                    out.append(CompositionWitness(outer, inner, comp.delta))
    cat.cache[key] = out
    return out


def composition_falsifier(f: Subfunctor, bound: int = 3) -> CompositionWitness | None:
    for w in composition_instances(f.cat, bound):
        if f.contains(w.outer) and f.contains(w.inner) and not f.contains(w.composite):
            return w
    return None


def is_closed(f: Subfunctor, bound: int | None = 3) -> bool:
    """Closedness by the Serre criterion, cross-checked by the composition search."""
    from .defects import serre_to_subfunctor, support
    exact = serre_to_subfunctor(f.cat, support(f)) == f
    if bound is not None:
        witness = composition_falsifier(f, bound)
        if exact and witness is not None:
            raise InternalConsistencyError("Serre criterion says closed but deflations fail to compose")
        if not exact and witness is None:
            raise InternalConsistencyError("Serre criterion says not closed but no composition witness exists")
    return exact

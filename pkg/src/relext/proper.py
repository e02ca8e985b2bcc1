"""Proper classes of triangles, stored through their subfunctor of classes."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .category import (BasedCategory, ExtElem, Obj, Triangle, act_left, act_right, direct_sum_ext,
                       realize)
from .relative import Subfunctor


@dataclass(frozen=True, eq=False)
class ProperClass:
    subfunctor: Subfunctor

    @property
    def cat(self) -> BasedCategory:
        return self.subfunctor.cat


def contains_triangle(x: ProperClass, t: Triangle) -> bool:
    return x.subfunctor.contains(t.delta)


def classes_of(x: ProperClass) -> Subfunctor:
    """Recover ``E_xi`` by testing realized triangles of every extension."""
    cat = x.cat
    bases = {}
    for j, i in cat.pairs():
        bases[j, i] = [e.coords for e in cat.ext_elements(Obj.of(j), Obj.of(i))
                       if contains_triangle(x, realize(e))]
    return Subfunctor.from_bases(cat, bases)


@dataclass
class AxiomReport:
    failures: list[str] = field(default_factory=list)
    checked: int = 0

    @property
    def ok(self) -> bool:
        return not self.failures


def check_proper_axioms(x: ProperClass, samples: int = 200, seed: int = 0) -> AxiomReport:
    """Split triangles, direct sums, base change and cobase change.

    Base and cobase change run over all members on indecomposable ends and all
    basis morphisms; direct sums over ``samples`` random pairs of members.
    """
    cat = x.cat
    f = x.subfunctor
    rep = AxiomReport()
    members = []
    for j, i in cat.pairs():
        rep.checked += 1
        if not f.contains(cat.ext_elem(Obj.of(j), Obj.of(i))):
            rep.failures.append(f"split triangle over ({cat.name(j)},{cat.name(i)}) missing")
        for v in f.spaces[j, i].elements():
            members.append(cat.ext_elem(Obj.of(j), Obj.of(i), v))
    for d in members:
        j, i = d.c_obj.summands[0], d.a_obj.summands[0]
        for j2 in range(cat.n):
            for k in range(cat.hom_dim[j2, j]):
                rep.checked += 1
                if not f.contains(act_right(d, cat.basis_map(j2, j, k))):
                    rep.failures.append(f"base change along {cat.name(j2)}->{cat.name(j)}")
        for i2 in range(cat.n):
            for k in range(cat.hom_dim[i, i2]):
                rep.checked += 1
                if not f.contains(act_left(cat.basis_map(i, i2, k), d)):
                    rep.failures.append(f"cobase change along {cat.name(i)}->{cat.name(i2)}")
    rng = np.random.default_rng(seed)
    if members:
        for _ in range(samples):
            a, b = (members[int(k)] for k in rng.integers(0, len(members), size=2))
            rep.checked += 1
            if not contains_triangle(x, realize(direct_sum_ext(a, b))):
                rep.failures.append("direct sum of members left the class")
    return rep


def shifted_square(d1: ExtElem, d2: ExtElem):
    return d1.cat.backend.shifted_square(d1, d2)


@dataclass(frozen=True, eq=False)
class SaturationInstance:
    column: ExtElem   # delta_2 in E(C, A_2)
    row: ExtElem      # delta_1 y_2 in E(B_2, A_1)
    third: ExtElem    # delta_1 in E(C, A_1)


def saturation_instances(cat: BasedCategory) -> list[SaturationInstance]:
    """All pairs of extensions over a common indecomposable ``C`` with indecomposable ``A_i``."""
    key = ("saturation_instances",)
    if key in cat.cache:
        return cat.cache[key]
    out = []
    for c in range(cat.n):
        for a2 in range(cat.n):
            for d2 in cat.ext_elements(Obj.of(c), Obj.of(a2)):
                y2 = realize(d2).g
                for a1 in range(cat.n):
                    for d1 in cat.ext_elements(Obj.of(c), Obj.of(a1)):
                        out.append(SaturationInstance(d2, act_right(d1, y2), d1))
    cat.cache[key] = out
    return out


def saturation_counterexample(x: ProperClass) -> SaturationInstance | None:
    f = x.subfunctor
    for s in saturation_instances(x.cat):
        if f.contains(s.column) and f.contains(s.row) and not f.contains(s.third):
            return s
    return None


def is_saturated(x: ProperClass) -> bool:
    return saturation_counterexample(x) is None

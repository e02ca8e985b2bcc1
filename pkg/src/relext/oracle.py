"""Brute-force ground truth that avoids the defect and Serre-set machinery.

Additive subfunctors are found by filtering every family of subspaces through
action stability, using the raw action tensors of the category; closedness is
decided by the composition search alone.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

from . import linalg as la
from .category import BasedCategory
from .relative import CompositionWitness, Subfunctor, composition_falsifier


class OracleTooLarge(la.EnumerationTooLarge):
    pass


def _stable(cat: BasedCategory, choice: dict) -> bool:
    p = cat.p
    for (j, i), space in choice.items():
        if space.dim == 0:
            continue
        m = space.matrix.T
        for i2 in range(cat.n):
            act = cat.ext.left[j, i, i2]
            for k in range(act.shape[0]):
                img = la.matmul(act[k], m, p)
                if any(not choice[j, i2].contains_vector(img[:, c]) for c in range(img.shape[1])):
                    return False
        for j2 in range(cat.n):
            act = cat.ext.right[j, j2, i]
            for k in range(act.shape[0]):
                img = la.matmul(act[k], m, p)
                if any(not choice[j2, i].contains_vector(img[:, c]) for c in range(img.shape[1])):
                    return False
    return True


def search_space_size(cat: BasedCategory) -> int:
    return math.prod(la.count_subspaces(cat.ext_dim(j, i), cat.p) for j, i in cat.pairs())


def enumerate_additive_subfunctors(cat: BasedCategory, cap: int = 200_000) -> list[Subfunctor]:
    key = ("oracle_additive", cap)
    if key in cat.cache:
        return cat.cache[key]
    total = search_space_size(cat)
    if total > cap:
        raise OracleTooLarge(f"{total} candidate families exceed the cap {cap}")
    pairs = [ji for ji in cat.pairs() if cat.ext_dim(*ji)]
    fixed = {ji: la.Subspace.zero(0, cat.p) for ji in cat.pairs() if not cat.ext_dim(*ji)}
    options = [la.enumerate_subspaces(cat.ext_dim(*ji), cat.p, cap) for ji in pairs]
    out = []
    for combo in itertools.product(*options):
        choice = dict(fixed)
        choice.update(zip(pairs, combo))
        if _stable(cat, choice):
            out.append(Subfunctor(cat, choice))
    cat.cache[key] = out
    return out


@dataclass
class OracleReport:
    additive: list[Subfunctor]
    closed: list[Subfunctor]
    witnesses: dict  # index into additive -> CompositionWitness for non-closed ones

    @property
    def non_closed(self) -> list[Subfunctor]:
        return [self.additive[k] for k in sorted(self.witnesses)]


def oracle_closed(cat: BasedCategory, cap: int = 200_000, bound: int = 3) -> OracleReport:
    additive = enumerate_additive_subfunctors(cat, cap)
    closed, witnesses = [], {}
    for k, f in enumerate(additive):
        w: CompositionWitness | None = composition_falsifier(f, bound)
        if w is None:
            closed.append(f)
        else:
            witnesses[k] = w
    return OracleReport(additive, closed, witnesses)

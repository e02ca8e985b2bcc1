import itertools

import numpy as np
import pytest

from relext import category as C
from relext import defects as D
from relext import linalg as la
from relext import relative as R
from relext.category import Obj


def test_subfunctor_order(a3):
    zero, full = R.Subfunctor.zero(a3), R.Subfunctor.full(a3)
    assert zero <= full and not full <= zero
    assert R.validate_subfunctor(zero).ok and R.validate_subfunctor(full).ok


def test_invalid_assignment_detected(a3):
    # full space at a single pair, zero elsewhere: some action leaves the pair
    bad = None
    for j, i in a3.ext_pairs():
        spaces = {ji: la.Subspace.zero(a3.ext_dim(*ji), a3.p) for ji in a3.pairs()}
        spaces[j, i] = la.Subspace.full(a3.ext_dim(j, i), a3.p)
        f = R.Subfunctor(a3, spaces)
        if not R.validate_subfunctor(f).ok:
            bad = f
            break
    assert bad is not None
    assert R.validate_subfunctor(bad).violations


def test_closure_a2(a2):
    d = a2.ext_basis(a2.index("S1"), a2.index("S2"))[0]
    assert R.closure(a2, [d]) == R.Subfunctor.full(a2)
    assert R.closure(a2, []).is_zero()


def test_intersect_two_lines(st4):
    m2 = st4.index("M2")
    lines = [R.closure(st4, [st4.ext_elem(Obj.of(m2), Obj.of(m2), v)]) for v in ((1, 0), (0, 1))]
    meet = R.intersect(*lines)
    assert R.validate_subfunctor(meet).ok
    assert meet <= lines[0] and meet <= lines[1]
    # the nilpotent line generates a subfunctor of the one generated by a unit class
    assert lines[0] <= lines[1] and meet == lines[0]
    assert lines[1].spaces[m2, m2].dim == 2 and lines[1] != R.Subfunctor.full(st4)
    a, b = (la.Subspace.span([v], 2, 2) for v in ((1, 0), (1, 1)))
    assert a.intersect(b).dim == 0


def test_functors_half_exact(small):
    from relext.verify import functor_family
    for h in functor_family(small):
        assert R.functor_violations(h) == []


def test_yoneda_on_s1(a3):
    s1 = a3.index("S1")
    f = R.e_r(a3, R.restricted_yoneda(a3, [s1]))
    for j, i in a3.ext_pairs():
        for d in a3.ext_elements(Obj.of(j), Obj.of(i)):
            sharp = C.sharp_contra(d, s1)
            assert f.contains(d) == (not sharp.any())


def test_e_d_extremes(small):
    assert R.e_d(small, small.projectives) == R.Subfunctor.full(small)
    assert R.e_d(small, range(small.n)).is_zero()


def test_e_d_matches_yoneda(small):
    for k in (1, 2):
        for s in itertools.combinations(range(small.n), k):
            assert R.e_d(small, s) == R.e_r(small, R.restricted_yoneda(small, s))
            assert R.e_upper_d(small, s) == R.e_r(small, R.restricted_coyoneda(small, s))


def test_e_r_closed(small):
    from relext.verify import functor_family
    for h in functor_family(small):
        assert R.is_closed(R.e_r(small, h))
        assert R.is_closed(R.e_l(small, h))


def test_exact_structure(a3, st4):
    # in the module category every class is an exact sequence
    assert R.e_exact(a3) == R.Subfunctor.full(a3)
    assert R.e_exact(st4).is_zero()
    for cat in (a3, st4):
        ya = R.restricted_yoneda(cat, range(cat.n))
        yc = R.restricted_coyoneda(cat, range(cat.n))
        assert R.e_exact(cat) == R.intersect(R.e_l(cat, ya), R.e_l(cat, yc))


def test_homological_class_collapses(st4, a3):
    assert R.proper_class_from_homological(st4, R.restricted_yoneda(st4, range(st4.n))).is_zero()
    with pytest.raises(C.CategoryError):
        R.proper_class_from_homological(a3, R.restricted_yoneda(a3, [0]))


def test_shift_chain_decreasing(st4):
    h = R.restricted_yoneda(st4, [0])
    chain = R.shift_intersections(st4, h, 4)
    for a, b in zip(chain, chain[1:]):
        assert b <= a
    assert chain[1] == chain[-1]


def test_shifted_functor(st4):
    h = R.restricted_yoneda(st4, [0])
    h1 = R.compose_shift(h, 1)
    assert R.functor_violations(h1) == []
    assert R.compose_shift(h, R._susp_order(st4)).dims == h.dims


def test_maximality_inapplicable(a3):
    h = R.restricted_yoneda(a3, [a3.index("S1")])
    full = R.Subfunctor.full(a3)
    with pytest.raises(R.Inapplicable):
        R.maximality_check(full, h)
    assert R.maximality_check(R.Subfunctor.zero(a3), h)


def test_non_closed_detected_both_ways(a3):
    from relext import oracle as O
    rep = O.oracle_closed(a3)
    assert rep.witnesses
    for k, f in enumerate(rep.additive):
        serre = D.serre_to_subfunctor(a3, D.support(f)) == f
        assert serre == (R.composition_falsifier(f) is None) == (k not in rep.witnesses)
    for f in rep.non_closed:
        w = R.composition_falsifier(f)
        assert f.contains(w.outer) and f.contains(w.inner) and not f.contains(w.composite)

import itertools

import pytest

from relext import category as C
from relext import defects as D
from relext import relative as R
from relext.category import Obj


def _a2_class(a2):
    return a2.ext_basis(a2.index("S1"), a2.index("S2"))[0]


def test_a2_defect_values(a2):
    d = _a2_class(a2)
    s1, s2 = a2.index("S1"), a2.index("S2")
    contra = D.defect_of(d).underlying
    assert contra.dim_vector() == {"[1,1]": 1, "[2,2]": 0, "[1,2]": 0}
    co = D.co_defect_of(d)
    assert co.dims[s2] == 1 and sum(co.dims) == 1
    assert D.composition_factors(contra) == {s1: 1}
    dual = D.duality_d(D.defect_of(d))
    assert dual.dims == co.dims
    assert D.gamma(a2, s1).dims == (1, 0, 0)


def test_defects_are_functors_vanishing_on_projectives(small):
    for j, i in small.ext_pairs():
        for d in small.ext_elements(Obj.of(j), Obj.of(i)):
            f = D.defect_of(d).underlying
            assert f.functoriality_violations() == []
            assert all(f.dims[q] == 0 for q in small.projectives)
            assert f.dims == D.defect_dims(d)
            assert d.is_zero() == f.is_zero()


def test_defect_independent_of_realization(small):
    import numpy as np
    rng = np.random.default_rng(3)
    for j, i in small.ext_pairs():
        d = small.ext_basis(j, i)[0]
        t = C.perturb_triangle(C.realize(d), rng)
        assert D.defect_of(d, t).underlying.dims == D.defect_of(d).underlying.dims


def test_duality_and_double_dual(small):
    for j, i in small.ext_pairs():
        for d in small.ext_elements(Obj.of(j), Obj.of(i)):
            df = D.defect_of(d)
            assert D.same_embedded(D.duality_d(df), D.co_defect_of(d))
            assert D.dual_back_dims(d) == df.underlying.dims
            assert sum(D.co_defect_of(d).dims) == sum(D.duality_d(df).dims)


def test_composition_factors_rejects_non_defect(a3):
    q = a3.projectives[0]
    f = D.FpFunctor(a3, tuple(int(x == q) for x in range(a3.n)), {}, "contra", None)
    with pytest.raises(D.NotADefect):
        D.composition_factors(f)


def test_gamma_kills_projectives(small):
    for x in range(small.n):
        g = D.gamma(small, x)
        assert g.functoriality_violations() == []
        for y in range(small.n):
            assert g.dims[y] == D.stable_hom_dim(small, y, x)
    for q in small.projectives:
        assert D.gamma(small, q).is_zero()


def test_serre_sets_and_subfunctors(small):
    sets = D.all_serre_sets(small)
    assert len(sets) == 2 ** len(small.non_projectives)
    empty = D.SerreSet.of(small, [])
    assert D.serre_to_subfunctor(small, empty).is_zero()
    full = D.SerreSet.of(small, small.non_projectives)
    assert D.serre_to_subfunctor(small, full) == R.Subfunctor.full(small)
    assert D.support(R.Subfunctor.full(small)) == full
    for s in sets:
        rest = [x for x in small.non_projectives if x not in s.members]
        assert D.serre_to_subfunctor(small, s) == R.e_d(small, rest)
        assert D.subfunctor_to_serre(D.serre_to_subfunctor(small, s)) == s


def test_serre_set_rejects_projective(a3):
    with pytest.raises(C.CategoryError):
        D.SerreSet.of(a3, [a3.projectives[0]])


def test_subfunctor_to_serre_needs_closed(a3):
    from relext import oracle as O
    f = O.oracle_closed(a3).non_closed[0]
    with pytest.raises(R.Inapplicable):
        D.subfunctor_to_serre(f)


def test_closed_lattice_is_boolean(a3):
    entries = D.enumerate_closed(a3)
    assert len(entries) == 8
    edges = D.covering_edges(entries)
    assert len(edges) == 12  # Hasse diagram of a cube
    for a, b in edges:
        assert len(entries[b].serre.members) == len(entries[a].serre.members) + 1


def test_projectivization(small):
    for s in D.all_serre_sets(small):
        h = D.projectivization(small, s)
        assert R.functor_violations(h) == []
        assert all(h.dims[q] == 0 for q in small.projectives)
        assert R.e_r(small, h) == D.serre_to_subfunctor(small, s)


def test_lifted_functor(small):
    from relext.verify import functor_family
    simples = D.simple_defects(small)
    assert set(simples) == set(small.non_projectives)
    for h in functor_family(small):
        f = R.e_r(small, h)
        for j, i in small.ext_pairs():
            for d in small.ext_basis(j, i):
                lifted = D.lift_h(h, D.defect_of(d))
                assert f.contains(d) == (lifted == 0)
                if h.variance == "co":
                    # additivity along a composition series
                    assert lifted == D.lifted_dims_by_factors(h, d, simples)


def test_lift_of_representable(small):
    for x in range(small.n):
        h = R.restricted_yoneda(small, [x])
        for j, i in small.ext_pairs():
            for d in small.ext_elements(Obj.of(j), Obj.of(i)):
                assert D.lift_h(h, D.defect_of(d)) == D.defect_dims(d)[x]


def test_lift_additive_on_sums(a3):
    h = R.restricted_yoneda(a3, range(a3.n))
    pairs = a3.ext_pairs()
    for (j, i), (j2, i2) in itertools.combinations(pairs, 2):
        d, d2 = a3.ext_basis(j, i)[0], a3.ext_basis(j2, i2)[0]
        s = C.direct_sum_ext(d, d2)
        assert D.lift_h(h, D.defect_of(s)) == D.lift_h(h, D.defect_of(d)) + D.lift_h(h, D.defect_of(d2))

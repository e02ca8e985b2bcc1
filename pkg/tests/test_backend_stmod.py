import itertools

import pytest

from relext import category as C
from relext import defects as D
from relext.backends import StmodSpec, build_stmod_category, suspend
from relext.category import Obj


def stable_hom(i, j, n):
    # Hom(M_i, M_j) has dimension min(i, j); maps through free modules: max(0, i + j - n)
    return min(i, j) - max(0, i + j - n)


@pytest.mark.parametrize("n,p", [(3, 2), (4, 2), (5, 2), (3, 3), (4, 3)])
def test_hom_and_ext_closed_form(n, p):
    cat = build_stmod_category(StmodSpec(n, p))
    assert cat.n == n - 1 and cat.projectives == []
    for a, b in itertools.product(range(cat.n), repeat=2):
        i, j = a + 1, b + 1
        assert cat.hom_dim[a, b] == stable_hom(i, j, n)
        # E(M_i, M_j) = Hom_st(M_i, M_{n-j})
        assert cat.ext_dim(a, b) == stable_hom(i, n - j, n)


def test_n4_tables(st4):
    assert st4.hom_dim.tolist() == [[1, 1, 1], [1, 2, 1], [1, 1, 1]]
    assert st4.ext_dim(st4.index("M2"), st4.index("M2")) == 2


def test_n4_middle_terms(st4):
    m1, m2, m3 = (st4.index(x) for x in ("M1", "M2", "M3"))
    d = st4.ext_basis(m1, m1)[0]
    assert C.realize(d).b == Obj.of(m2)
    mids = {v: C.realize(st4.ext_elem(Obj.of(m2), Obj.of(m2), v)).b for v in [(1, 0), (0, 1), (1, 1)]}
    # only the nilpotent line gives a non-projective middle term
    assert sorted(mids[1, 0].summands) == [m1, m3]
    assert mids[0, 1].is_zero and mids[1, 1].is_zero


def test_inflations_not_mono(st4):
    for j, i in st4.ext_pairs():
        for d in st4.ext_elements(Obj.of(j), Obj.of(i)):
            if not d.is_zero():
                assert not C.is_mono(C.realize(d).f)


def test_suspension_is_involution_like(st4):
    sig = lambda x, k=1: suspend(st4, Obj.of(x), k).summands[0]
    assert [sig(x) for x in range(st4.n)] == [2, 1, 0]
    for x in range(st4.n):
        assert sig(sig(x)) == x
        assert sig(x, 5) == sig(x)
    for j, i in st4.pairs():
        assert st4.ext_dim(j, i) == st4.hom_dim[j, sig(i)]
    assert suspend(st4, Obj.of(0, 1)) == Obj.of(2, 1)


def test_all_deflations(st4):
    for x, y in itertools.product(range(st4.n), repeat=2):
        for h in st4.hom_elements(Obj.of(x), Obj.of(y)):
            t = C.deflation_completion(h)
            assert t is not None and C.validate_triangle(t).ok


def test_defects_of_units(st4):
    m2 = st4.index("M2")
    unit = st4.ext_elem(Obj.of(m2), Obj.of(m2), (0, 1))
    nil = st4.ext_elem(Obj.of(m2), Obj.of(m2), (1, 0))
    assert D.defect_dims(unit) == (1, 2, 1)
    assert D.defect_dims(nil) == (0, 1, 0)
    assert D.composition_factors(D.defect_of(nil).underlying) == {m2: 1}


@pytest.mark.parametrize("n", [2, 6])
def test_spec_validation(n):
    with pytest.raises(ValueError):
        StmodSpec(n)

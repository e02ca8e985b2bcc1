import pytest

from relext import category as C
from relext import defects as D
from relext import linalg as la
from relext import oracle as O
from relext import proper as P
from relext import relative as R
from relext.category import Obj


def test_split_triangles_in_every_class(small):
    for e in D.enumerate_closed(small, check=False):
        x = P.ProperClass(e.subfunctor)
        for j, i in small.pairs():
            assert P.contains_triangle(x, C.split_triangle(small, Obj.of(j), Obj.of(i)))


def test_axioms_hold_for_subfunctors(small):
    for f in O.oracle_closed(small).additive:
        assert P.check_proper_axioms(P.ProperClass(f), samples=30).ok


def test_axioms_fail_for_unstable_assignment(a3):
    found = False
    for j, i in a3.ext_pairs():
        spaces = {ji: la.Subspace.zero(a3.ext_dim(*ji), a3.p) for ji in a3.pairs()}
        spaces[j, i] = la.Subspace.full(a3.ext_dim(j, i), a3.p)
        rep = P.check_proper_axioms(P.ProperClass(R.Subfunctor(a3, spaces)), samples=10)
        if not rep.ok:
            found = True
            assert any("change" in msg for msg in rep.failures)
    assert found


def test_classes_roundtrip(small):
    for f in O.oracle_closed(small).additive:
        assert P.classes_of(P.ProperClass(f)) == f


def test_saturation_equals_closedness(a3, st4):
    for cat in (a3, st4):
        for f in O.oracle_closed(cat).additive:
            x = P.ProperClass(f)
            assert P.is_saturated(x) == R.is_closed(f)
            s = P.saturation_counterexample(x)
            if s is not None:
                assert f.contains(s.column) and f.contains(s.row) and not f.contains(s.third)


def test_shifted_square_a3(a3):
    # two independent nonsplit classes over the same C
    c = a3.index("S1")
    targets = [i for i in range(a3.n) if a3.ext_dim(c, i)]
    assert len(targets) == 2
    d1, d2 = (a3.ext_basis(c, i)[0] for i in targets)
    sq = P.shifted_square(d1, d2)
    assert sq.equation_holds
    assert C.validate_triangle(sq.row).ok and C.validate_triangle(sq.column).ok


def test_shifted_square_stmod(st4):
    m2 = st4.index("M2")
    for i in range(st4.n):
        for i2 in range(st4.n):
            for d1 in st4.ext_basis(m2, i):
                for d2 in st4.ext_basis(m2, i2):
                    sq = P.shifted_square(d1, d2)
                    assert sq.equation_holds
                    assert C.validate_triangle(sq.row).ok and C.validate_triangle(sq.column).ok

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from relext import category as C
from relext.category import Mor, Obj


def test_bimodule_axioms(small):
    assert C.bimodule_violations(small) == []


def test_every_realization_is_a_triangle(small):
    for j, i in small.ext_pairs():
        for d in small.ext_elements(Obj.of(j), Obj.of(i)):
            assert C.validate_triangle(C.realize(d)).ok


def test_f3_realizations():
    from relext import verify
    for name in ("A3-RR-p3", "stmod3-p3"):
        cat = verify.instance(name)
        assert C.bimodule_violations(cat) == []
        for j, i in cat.ext_pairs():
            for d in cat.ext_elements(Obj.of(j), Obj.of(i)):
                assert C.validate_triangle(C.realize(d)).ok


def test_zero_class_realizes_split(small):
    for j, i in small.pairs():
        t = C.realize(small.ext_elem(Obj.of(j), Obj.of(i)))
        assert sorted(t.b.summands) == sorted((i, j))
        assert C.validate_triangle(C.split_triangle(small, Obj.of(j), Obj.of(i))).ok


def test_direct_sum_with_zero(a3):
    s1, s2 = a3.index("S1"), a3.index("S2")
    d = a3.ext_basis(s1, s2)[0]
    z = a3.ext_elem(Obj.of(s2), Obj.of(s1))
    t = C.realize(C.direct_sum_ext(d, z))
    assert C.validate_triangle(t).ok
    expected = C.realize(d).b.summands + (s1, s2)
    assert sorted(t.b.summands) == sorted(expected)


def test_corrupted_deflation_is_flagged(small):
    j, i = small.ext_pairs()[0]
    t = C.realize(small.ext_basis(j, i)[0])
    bad = C.Triangle(t.f, Mor.zero(small, t.b, t.c), t.delta)
    rep = C.validate_triangle(bad)
    assert not rep.ok and rep.failures
    wrong_class = C.Triangle(t.f, t.g, small.ext_elem(t.c, t.a))
    assert not C.validate_triangle(wrong_class).ok


def test_perturbed_triangles_stay_valid(small):
    rng = np.random.default_rng(1)
    for j, i in small.ext_pairs():
        t = C.realize(small.ext_basis(j, i)[0])
        for _ in range(3):
            assert C.validate_triangle(C.perturb_triangle(t, rng)).ok


def test_sharp_maps_a2(a2):
    d = a2.ext_basis(a2.index("S1"), a2.index("S2"))[0]
    assert C.sharp_contra(d, a2.index("S1")).tolist() == [[1]]
    assert C.sharp_co(d, a2.index("S2")).tolist() == [[1]]


def test_morphism_arithmetic(a3):
    x = Obj.of(a3.index("[1,2]"), a3.index("S2"))
    i = Mor.identity(a3, x)
    assert C.compose(i, i) == i
    assert (i - i).is_zero()
    assert Mor.from_vector(a3, x, x, i.vector()) == i
    pr, inc = C.projection(a3, [Obj.of(x.summands[0]), Obj.of(x.summands[1])], 0), \
        C.inclusion(a3, [Obj.of(x.summands[0]), Obj.of(x.summands[1])], 0)
    assert C.compose(pr, inc) == Mor.identity(a3, Obj.of(x.summands[0]))
    with pytest.raises(C.CategoryError):
        C.compose(pr, pr)


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_composition_associative(data):
    from relext import verify
    cat = verify.instance("A3-RL")
    objs = [Obj.of(*data.draw(st.lists(st.integers(0, cat.n - 1), min_size=1, max_size=2))) for _ in range(4)]
    def pick(x, y):
        v = data.draw(st.lists(st.integers(0, 1), min_size=cat.hom_dim_obj(x, y), max_size=cat.hom_dim_obj(x, y)))
        return Mor.from_vector(cat, x, y, v)
    f, g, h = pick(objs[0], objs[1]), pick(objs[1], objs[2]), pick(objs[2], objs[3])
    assert C.compose(h, C.compose(g, f)) == C.compose(C.compose(h, g), f)


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_actions_compatible_with_composition(data):
    from relext import verify
    cat = verify.instance("stmod4")
    j, i = data.draw(st.sampled_from(cat.ext_pairs()))
    d = data.draw(st.sampled_from(cat.ext_basis(j, i)))
    i2, j2 = data.draw(st.integers(0, cat.n - 1)), data.draw(st.integers(0, cat.n - 1))
    ga = cat.hom_elements(Obj.of(i), Obj.of(i2))
    fc = cat.hom_elements(Obj.of(j2), Obj.of(j))
    for a in ga:
        for c in fc:
            assert C.act_right(C.act_left(a, d), c) == C.act_left(a, C.act_right(d, c))


def test_mono_epi(a2):
    s2, p1, s1 = a2.index("S2"), a2.index("P1"), a2.index("S1")
    inc = a2.hom_basis(Obj.of(s2), Obj.of(p1))[0]
    assert C.is_mono(inc) and not C.is_epi(inc) and not C.is_iso(inc)
    assert C.is_iso(Mor.identity(a2, Obj.of(s1, s2)))

import itertools

import numpy as np
import pytest

from relext import category as C
from relext.backends import QuiverSpec, build_quiver_category
from relext.category import Obj


def interval_of(name):
    a, b = name.strip("[]").split(",")
    return int(a), int(b)


def brute_hom_dim(m, n, orientation, p):
    """log_p of the number of vertexwise scalars commuting with every arrow."""
    arrows = [(v, v + 1) if c == "R" else (v + 1, v) for v, c in enumerate(orientation, start=1)]
    inside = lambda iv, v: iv[0] <= v <= iv[1]
    common = [v for v in range(1, len(orientation) + 2) if inside(m, v) and inside(n, v)]
    count = 0
    for lams in itertools.product(range(p), repeat=len(common)):
        lam = dict(zip(common, lams))
        ok = True
        for s, t in arrows:
            m_arrow = 1 if inside(m, s) and inside(m, t) else 0
            n_arrow = 1 if inside(n, s) and inside(n, t) else 0
            if (n_arrow * lam.get(s, 0) - lam.get(t, 0) * m_arrow) % p:
                ok = False
                break
        count += ok
    d = round(np.log(count) / np.log(p))
    assert p ** d == count
    return d


def euler(m, n, orientation):
    arrows = [(v, v + 1) if c == "R" else (v + 1, v) for v, c in enumerate(orientation, start=1)]
    inside = lambda iv, v: int(iv[0] <= v <= iv[1])
    verts = sum(inside(m, v) * inside(n, v) for v in range(1, len(orientation) + 2))
    return verts - sum(inside(m, s) * inside(n, t) for s, t in arrows)


ORIENTS = ["R", "L", "RR", "RL", "LR", "LL", "RRR", "RLR", "LRL", "RRL"]


@pytest.mark.parametrize("orient", ORIENTS)
def test_hom_and_ext_against_brute_force(orient):
    cat = build_quiver_category(QuiverSpec(len(orient) + 1, orient, 2))
    ivs = [interval_of(cat.name(i)) for i in range(cat.n)]
    n = len(orient) + 1
    assert cat.n == n * (n + 1) // 2
    for x, y in itertools.product(range(cat.n), repeat=2):
        h = brute_hom_dim(ivs[x], ivs[y], orient, 2)
        assert cat.hom_dim[x, y] == h
        assert cat.ext_dim(x, y) == h - euler(ivs[x], ivs[y], orient)


def test_hom_over_f3():
    cat = build_quiver_category(QuiverSpec(3, "RL", 3))
    ivs = [interval_of(cat.name(i)) for i in range(cat.n)]
    for x, y in itertools.product(range(cat.n), repeat=2):
        assert cat.hom_dim[x, y] == brute_hom_dim(ivs[x], ivs[y], "RL", 3)


def test_projectives_have_no_ext(small):
    for q in small.projectives:
        assert all(small.ext_dim(q, i) == 0 for i in range(small.n))


def test_a2_objects(a2):
    assert a2.n == 3
    assert {a2.name(i) for i in a2.projectives} == {"[1,2]", "[2,2]"}
    assert a2.index("P1") == a2.index("[1,2]") and a2.index("P_2") == a2.index("S2")
    assert [(j, i) for j, i in a2.pairs() if a2.ext_dim(j, i)] == [(a2.index("S1"), a2.index("S2"))]


def test_a3_objects(a3):
    assert {a3.name(i) for i in a3.projectives} == {"[1,3]", "[2,3]", "[3,3]"}
    assert len(a3.non_projectives) == 3


def test_a2_realization_middle_is_p1(a2):
    d = a2.ext_basis(a2.index("S1"), a2.index("S2"))[0]
    t = C.realize(d)
    assert t.b == Obj.of(a2.index("P1"))
    assert C.is_mono(t.f) and C.is_epi(t.g)


def test_a3_realization(a3):
    d = a3.ext_basis(a3.index("[2,2]"), a3.index("[3,3]"))[0]
    assert C.realize(d).b == Obj.of(a3.index("[2,3]"))


def test_a2_composite_through_projective(a2):
    p1, s1, p2 = (a2.index(x) for x in ("P1", "S1", "P2"))
    g = a2.hom_basis(Obj.of(p1), Obj.of(s1))[0]
    f = a2.hom_basis(Obj.of(p2), Obj.of(p1))[0]
    assert C.compose(g, f).is_zero()
    assert a2.hom_dim[p2, s1] == 0


def test_a3_pushout_along_socle_inclusion(a3):
    # S_2 embeds into [1,2]; the pushout of E(S_1,S_2) along it splits
    s1, s2, i12 = (a3.index(x) for x in ("S1", "S2", "[1,2]"))
    d = a3.ext_basis(s1, s2)[0]
    a = a3.hom_basis(Obj.of(s2), Obj.of(i12))[0]
    res = C.pushout_triangle(C.realize(d), a)
    assert C.validate_triangle(res.t2).ok and C.validate_triangle(res.extra).ok
    assert res.t2.delta == C.act_left(a, d)
    assert res.t2.delta.is_zero()
    assert sorted(res.t2.b.summands) == sorted((s1, i12))


def test_non_deflations_exist(a3):
    # S_1 -> 0 is impossible but [1,1] -> ... maps that are not epi have no completion
    s2, i23 = a3.index("S2"), a3.index("[2,3]")
    h = a3.hom_basis(Obj.of(s2), Obj.of(a3.index("[1,2]")))[0]
    assert C.deflation_completion(h) is None
    g = a3.hom_basis(Obj.of(i23), Obj.of(s2))[0]
    t = C.deflation_completion(g)
    assert t is not None and C.validate_triangle(t).ok


@pytest.mark.parametrize("bad", [dict(n=1), dict(n=7), dict(n=3, orientation="RX"), dict(n=3, orientation="R"),
                                 dict(n=3, p=4)])
def test_spec_validation(bad):
    with pytest.raises(ValueError):
        QuiverSpec(**{"orientation": "", **bad})

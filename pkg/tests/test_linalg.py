import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from relext import linalg as la


def mats(p, max_rows=5, max_cols=5):
    return st.tuples(st.integers(1, max_rows), st.integers(1, max_cols)).flatmap(
        lambda rc: st.lists(st.integers(0, p - 1), min_size=rc[0] * rc[1], max_size=rc[0] * rc[1]).map(
            lambda xs: np.array(xs, dtype=np.int64).reshape(rc)))


def test_field_rejects_composite():
    with pytest.raises(ValueError):
        la.FieldSpec(4)
    assert la.FieldSpec(3).inv(2) == 2


def test_rref_known():
    m = np.array([[0, 2, 1], [0, 1, 2]])
    assert la.rref(m, 3).tolist() == [[0, 1, 2], [0, 0, 0]]
    assert la.rank(m, 3) == 1
    assert la.rank(m, 2) == 2


@given(mats(2) | mats(3))
def test_rref_idempotent(m):
    for p in (2, 3):
        r = la.rref(m % p, p)
        assert np.array_equal(la.rref(r, p), r)


@given(mats(3, 6, 6))
def test_rank_nullity(m):
    p = 3
    k = la.kernel_basis(m, p)
    assert la.rank(m, p) + k.shape[1] == m.shape[1]
    if k.size:
        assert not la.matmul(m, k, p).any()


@given(mats(2, 5, 5))
def test_cokernel_dimension(m):
    q, d = la.cokernel(m, 2)
    assert d == m.shape[0] - la.rank(m, 2)
    assert q.shape[0] == d
    if d:
        assert not la.matmul(q, m, 2).any()


@given(mats(3, 4, 4), st.lists(st.integers(0, 2), min_size=4, max_size=4))
def test_solve_roundtrip(a, x):
    p = 3
    x = np.array(x[: a.shape[1]], dtype=np.int64).reshape(-1, 1)
    b = la.matmul(a, x, p)
    y = la.solve(a, b, p)
    assert np.array_equal(la.matmul(a, y, p), b)


def test_solve_inconsistent():
    with pytest.raises(la.NoSolution):
        la.solve(np.array([[1, 0], [0, 0]]), np.array([[0], [1]]), 2)
    assert la.try_solve(np.array([[0]]), np.array([[1]]), 2) is None


def test_inverse():
    a = np.array([[1, 1], [0, 1]])
    assert np.array_equal(la.matmul(a, la.inverse(a, 2), 2), np.eye(2, dtype=np.int64))
    with pytest.raises(la.LinalgError):
        la.inverse(np.array([[1, 1], [1, 1]]), 2)


def test_one_sided_inverses():
    a = np.array([[1], [1], [0]])
    l = la.left_inverse(a, 3)
    assert np.array_equal(la.matmul(l, a, 3), [[1]])
    r = la.right_inverse(a.T, 3)
    assert np.array_equal(la.matmul(a.T, r, 3), [[1]])


@given(st.lists(st.lists(st.integers(0, 2), min_size=3, max_size=3), max_size=4))
def test_subspace_canonical(vs):
    s = la.Subspace.span(vs, 3, 3)
    shuffled = la.Subspace.span(list(reversed(vs)) + vs, 3, 3)
    assert s == shuffled
    assert s.dim == (la.rank(np.array(vs), 3) if vs else 0)
    for v in vs:
        assert s.contains_vector(v)


@settings(max_examples=50)
@given(st.lists(st.lists(st.integers(0, 1), min_size=4, max_size=4), max_size=3),
       st.lists(st.lists(st.integers(0, 1), min_size=4, max_size=4), max_size=3))
def test_sum_intersection_dimension(u, w):
    a, b = la.Subspace.span(u, 2, 4), la.Subspace.span(w, 2, 4)
    assert a.sum(b).dim + a.intersect(b).dim == a.dim + b.dim
    assert a.contains(a.intersect(b)) and a.sum(b).contains(b)


def test_elements_count():
    s = la.Subspace.span([[1, 0, 1], [0, 1, 1]], 3, 3)
    els = list(s.elements())
    assert len(els) == 9
    assert all(s.contains_vector(v) for v in els)


def test_zero_ambient_span():
    assert la.Subspace.span([], 2, 0).dim == 0


@pytest.mark.parametrize("n,p,count", [(2, 2, 5), (2, 3, 6), (0, 2, 1), (3, 2, 16)])
def test_count_subspaces(n, p, count):
    assert la.count_subspaces(n, p) == count
    assert len(la.enumerate_subspaces(n, p)) == count


@pytest.mark.parametrize("n,p", [(2, 2), (3, 2), (2, 3), (3, 3)])
def test_gaussian_binomial_by_enumeration(n, p):
    # independent count: distinct row spaces of all k-tuples of vectors
    for k in range(n + 1):
        spaces = set()
        vecs = list(itertools.product(range(p), repeat=n))
        for combo in itertools.product(vecs, repeat=k):
            s = la.Subspace.span([list(v) for v in combo], p, n)
            if s.dim == k:
                spaces.add(s)
        assert len(spaces) == la.gaussian_binomial(n, k, p)


def test_enumeration_cap():
    with pytest.raises(la.EnumerationTooLarge):
        la.enumerate_subspaces(5, 3, cap=10)


def test_block_matrix():
    m = la.block_matrix([[np.ones((1, 2), dtype=np.int64), None], [None, np.eye(1, dtype=np.int64)]], [1, 1], [2, 1])
    assert m.tolist() == [[1, 1, 0], [0, 0, 1]]

"""Exact linear algebra over prime fields.

Matrices are plain ``numpy`` int64 arrays whose entries are reduced mod ``p``;
every function takes the characteristic explicitly.  Subspaces are stored in
canonical reduced row echelon form, so two subspaces are equal exactly when
their stored data are equal.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

import numpy as np

Mat = np.ndarray


class LinalgError(ValueError):
    pass


class DimensionError(LinalgError):
    pass


class NoSolution(LinalgError):
    pass


class EnumerationTooLarge(LinalgError):
    pass


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    return all(p % q for q in range(2, int(p**0.5) + 1))


@dataclass(frozen=True)
class FieldSpec:
    p: int = 2

    def __post_init__(self):
        if not isinstance(self.p, int) or not _is_prime(self.p):
            raise ValueError(f"characteristic must be a prime, got {self.p!r}")

    def inv(self, a: int) -> int:
        a %= self.p
        if a == 0:
            raise ZeroDivisionError("0 has no inverse")
        return pow(a, self.p - 2, self.p)

    def elements(self) -> range:
        return range(self.p)


def as_mat(m, p: int, shape: tuple[int, int] | None = None) -> Mat:
    a = np.array(m, dtype=np.int64)
    if shape is not None:
        a = a.reshape(shape)
    if a.ndim == 1:
        a = a.reshape(1, -1) if a.size else a.reshape(0, 0)
    return a % p


def zeros(rows: int, cols: int) -> Mat:
    return np.zeros((rows, cols), dtype=np.int64)


def identity(n: int) -> Mat:
    return np.eye(n, dtype=np.int64)


def matmul(a: Mat, b: Mat, p: int) -> Mat:
    if a.shape[1] != b.shape[0]:
        raise DimensionError(f"cannot multiply {a.shape} by {b.shape}")
    if a.size == 0 or b.size == 0:
        return zeros(a.shape[0], b.shape[1])
    return (a @ b) % p


def rref_pivots(m: Mat, p: int) -> tuple[Mat, list[int]]:
    """Reduced row echelon form and the list of pivot columns."""
    a = np.array(m, dtype=np.int64) % p
    rows, cols = a.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(a[r:, c])
        if nz.size == 0:
            continue
        k = r + int(nz[0])
        if k != r:
            a[[r, k]] = a[[k, r]]
        lead = int(a[r, c])
        if lead != 1:
            a[r] = (a[r] * pow(lead, p - 2, p)) % p
        col = a[:, c].copy()
        col[r] = 0
        hit = np.flatnonzero(col)
        if hit.size:
            a[hit] = (a[hit] - np.outer(col[hit], a[r])) % p
        pivots.append(c)
        r += 1
    return a, pivots


def rref(m: Mat, p: int) -> Mat:
    return rref_pivots(m, p)[0]


def rank(m: Mat, p: int) -> int:
    if m.size == 0:
        return 0
    return len(rref_pivots(m, p)[1])


def kernel_basis(m: Mat, p: int) -> Mat:
    """Columns spanning {v : m v = 0}, as a (cols x k) matrix."""
    rows, cols = m.shape
    if rows == 0:
        return identity(cols)
    r, piv = rref_pivots(m, p)
    free = [c for c in range(cols) if c not in set(piv)]
    basis = zeros(cols, len(free))
    for k, fc in enumerate(free):
        basis[fc, k] = 1
        for i, pc in enumerate(piv):
            basis[pc, k] = (-r[i, fc]) % p
    return basis


def kernel(m: Mat, p: int) -> "Subspace":
    return Subspace.span(kernel_basis(m, p).T, p, m.shape[1])


def image(m: Mat, p: int) -> "Subspace":
    return Subspace.span(m.T, p, m.shape[0])


def left_kernel_basis(m: Mat, p: int) -> Mat:
    """Rows y with y m = 0, independent, as a (k x rows) matrix."""
    return kernel_basis(m.T, p).T


def cokernel(m: Mat, p: int) -> tuple[Mat, int]:
    """A surjection from the codomain whose kernel is the image of ``m``."""
    proj = rref(left_kernel_basis(m, p), p)
    return proj, proj.shape[0]


def solve(a: Mat, b: Mat, p: int) -> Mat:
    """One solution ``x`` of ``a x = b`` (free variables set to zero)."""
    vector = b.ndim == 1
    bb = b.reshape(-1, 1) if vector else b
    rows, cols = a.shape
    if bb.shape[0] != rows:
        raise DimensionError(f"rhs has {bb.shape[0]} rows, expected {rows}")
    aug = np.concatenate([a % p, bb % p], axis=1) if rows else zeros(0, cols + bb.shape[1])
    r, piv = rref_pivots(aug, p)
    if any(c >= cols for c in piv):
        raise NoSolution("inconsistent linear system")
    x = zeros(cols, bb.shape[1])
    for i, c in enumerate(piv):
        x[c] = r[i, cols:]
    return x[:, 0] if vector else x


def try_solve(a: Mat, b: Mat, p: int) -> Mat | None:
    try:
        return solve(a, b, p)
    except NoSolution:
        return None


def inverse(a: Mat, p: int) -> Mat:
    n = a.shape[0]
    if a.shape != (n, n):
        raise DimensionError("inverse of a non-square matrix")
    r, piv = rref_pivots(np.concatenate([a % p, identity(n)], axis=1), p)
    if piv[:n] != list(range(n)):
        raise LinalgError("matrix is singular")
    return r[:, n:].copy()


def left_inverse(a: Mat, p: int) -> Mat:
    """``L`` with ``L a = I``; ``a`` must have independent columns."""
    rows, cols = a.shape
    if cols == 0:
        return zeros(0, rows)
    _, piv = rref_pivots(a.T, p)
    if len(piv) != cols:
        raise LinalgError("columns are not independent")
    out = zeros(cols, rows)
    out[:, piv] = inverse(a[piv, :], p)
    return out


def right_inverse(a: Mat, p: int) -> Mat:
    """``S`` with ``a S = I``; ``a`` must have independent rows."""
    return left_inverse(a.T, p).T


def block_matrix(blocks: Sequence[Sequence[Mat]], row_dims: Sequence[int],
                 col_dims: Sequence[int]) -> Mat:
    out = zeros(sum(row_dims), sum(col_dims))
    r0 = 0
    for i, rd in enumerate(row_dims):
        c0 = 0
        for j, cd in enumerate(col_dims):
            blk = blocks[i][j]
            if blk is not None and rd and cd:
                out[r0:r0 + rd, c0:c0 + cd] = blk
            c0 += cd
        r0 += rd
    return out


@dataclass(frozen=True)
class Subspace:
    p: int
    ambient_dim: int
    basis: tuple[tuple[int, ...], ...]

    @classmethod
    def span(cls, vectors, p: int, ambient_dim: int) -> "Subspace":
        if ambient_dim == 0:
            return cls(p, 0, ())
        m = np.array(vectors, dtype=np.int64).reshape(-1, ambient_dim) % p
        if m.shape[0] == 0:
            return cls(p, ambient_dim, ())
        r, piv = rref_pivots(m, p)
        return cls(p, ambient_dim, tuple(tuple(int(x) for x in r[i]) for i in range(len(piv))))

    @classmethod
    def zero(cls, ambient_dim: int, p: int) -> "Subspace":
        return cls(p, ambient_dim, ())

    @classmethod
    def full(cls, ambient_dim: int, p: int) -> "Subspace":
        return cls.span(identity(ambient_dim), p, ambient_dim)

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def matrix(self) -> Mat:
        if not self.basis:
            return zeros(0, self.ambient_dim)
        return np.array(self.basis, dtype=np.int64)

    def _check(self, other: "Subspace"):
        if self.ambient_dim != other.ambient_dim or self.p != other.p:
            raise DimensionError(
                f"subspaces of different ambients: {self.ambient_dim} vs {other.ambient_dim}")

    def sum(self, other: "Subspace") -> "Subspace":
        self._check(other)
        return Subspace.span(np.concatenate([self.matrix, other.matrix]), self.p, self.ambient_dim)

    def intersect(self, other: "Subspace") -> "Subspace":
        self._check(other)
        if self.dim == 0 or other.dim == 0:
            return Subspace.zero(self.ambient_dim, self.p)
        ann = np.concatenate([kernel_basis(self.matrix, self.p).T,
                              kernel_basis(other.matrix, self.p).T])
        return Subspace.span(kernel_basis(ann, self.p).T, self.p, self.ambient_dim)

    def contains(self, other: "Subspace") -> bool:
        self._check(other)
        return self.sum(other) == self

    def contains_vector(self, v) -> bool:
        v = np.asarray(v, dtype=np.int64) % self.p
        if v.shape != (self.ambient_dim,):
            raise DimensionError("vector length does not match the ambient dimension")
        if not v.any():
            return True
        if self.dim == 0:
            return False
        # reduce against the echelon basis
        m = self.matrix
        w = v.copy()
        for row in m:
            lead = int(np.flatnonzero(row)[0])
            if w[lead]:
                w = (w - w[lead] * row) % self.p
        return not w.any()

    def equals(self, other: "Subspace") -> bool:
        self._check(other)
        return self == other

    def elements(self) -> Iterator[np.ndarray]:
        m = self.matrix
        for coeffs in itertools.product(range(self.p), repeat=self.dim):
            if self.dim == 0:
                yield np.zeros(self.ambient_dim, dtype=np.int64)
            else:
                yield (np.array(coeffs, dtype=np.int64) @ m) % self.p


def all_vectors(n: int, p: int) -> Iterator[np.ndarray]:
    for t in itertools.product(range(p), repeat=n):
        yield np.array(t, dtype=np.int64)


def gaussian_binomial(n: int, k: int, q: int) -> int:
    if k < 0 or k > n:
        return 0
    num = den = 1
    for i in range(k):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


def count_subspaces(n: int, p: int) -> int:
    return sum(gaussian_binomial(n, k, p) for k in range(n + 1))


def enumerate_subspaces(ambient_dim: int, p: int, cap: int = 10_000) -> list[Subspace]:
    """Every subspace of F_p^n exactly once, by walking reduced echelon shapes."""
    total = count_subspaces(ambient_dim, p)
    if total > cap:
        raise EnumerationTooLarge(
            f"F_{p}^{ambient_dim} has {total} subspaces, above the cap {cap}")
    n = ambient_dim
    out: list[Subspace] = []
    for k in range(n + 1):
        for piv in itertools.combinations(range(n), k):
            pivset = set(piv)
            free_slots = [(i, c) for i, pc in enumerate(piv)
                          for c in range(pc + 1, n) if c not in pivset]
            for vals in itertools.product(range(p), repeat=len(free_slots)):
                m = zeros(k, n)
                for i, pc in enumerate(piv):
                    m[i, pc] = 1
                for (i, c), v in zip(free_slots, vals):
                    m[i, c] = v
                out.append(Subspace(p, n, tuple(tuple(int(x) for x in row) for row in m)))
    return out


def span_of(vectors: Iterable, p: int, ambient_dim: int) -> Subspace:
    vs = [np.asarray(v, dtype=np.int64) for v in vectors]
    if not vs:
        return Subspace.zero(ambient_dim, p)
    return Subspace.span(np.stack(vs), p, ambient_dim)

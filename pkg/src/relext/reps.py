"""Finite-dimensional representations of a finite quiver over F_p.

Both backends compute at this level: the path algebra of a type A quiver, and
``k[x]/(x^n)`` viewed as the one-loop quiver.  A representation stores one
vector space per vertex and one matrix per arrow (column vectors, so an arrow
``s -> t`` is a ``dims[t] x dims[s]`` matrix).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from . import linalg as la


@dataclass(frozen=True)
class Quiver:
    n_vertices: int
    arrows: tuple[tuple[int, int], ...]


@dataclass(frozen=True, eq=False)
class Rep:
    quiver: Quiver
    dims: tuple[int, ...]
    mats: tuple[np.ndarray, ...]

    @property
    def total_dim(self) -> int:
        return sum(self.dims)

    def check(self, p: int):
        for (s, t), m in zip(self.quiver.arrows, self.mats):
            assert m.shape == (self.dims[t], self.dims[s]), "arrow matrix shape"


@dataclass(frozen=True, eq=False)
class RepMap:
    src: Rep
    dst: Rep
    comps: tuple[np.ndarray, ...]

    def vec(self) -> np.ndarray:
        parts = [c.reshape(-1) for c in self.comps]
        return np.concatenate(parts) if parts else np.zeros(0, dtype=np.int64)

    def is_zero(self) -> bool:
        return not any(c.any() for c in self.comps)


def zero_rep(q: Quiver) -> Rep:
    return Rep(q, (0,) * q.n_vertices,
               tuple(la.zeros(0, 0) for _ in q.arrows))


def hom_ambient_dim(m: Rep, n: Rep) -> int:
    return sum(a * b for a, b in zip(m.dims, n.dims))


def map_from_vec(m: Rep, n: Rep, v: np.ndarray) -> RepMap:
    comps = []
    off = 0
    for a, b in zip(m.dims, n.dims):
        comps.append(np.array(v[off:off + a * b], dtype=np.int64).reshape(b, a))
        off += a * b
    return RepMap(m, n, tuple(comps))


def zero_map(m: Rep, n: Rep) -> RepMap:
    return RepMap(m, n, tuple(la.zeros(b, a) for a, b in zip(m.dims, n.dims)))


def identity_map(m: Rep) -> RepMap:
    return RepMap(m, m, tuple(la.identity(d) for d in m.dims))


def compose(g: RepMap, f: RepMap, p: int) -> RepMap:
    return RepMap(f.src, g.dst, tuple(la.matmul(a, b, p) for a, b in zip(g.comps, f.comps)))


def add(f: RepMap, g: RepMap, p: int) -> RepMap:
    return RepMap(f.src, f.dst, tuple((a + b) % p for a, b in zip(f.comps, g.comps)))


def scale(c: int, f: RepMap, p: int) -> RepMap:
    return RepMap(f.src, f.dst, tuple((c * a) % p for a in f.comps))


def combine(coeffs, maps: Sequence[RepMap], src: Rep, dst: Rep, p: int) -> RepMap:
    comps = [la.zeros(b, a) for a, b in zip(src.dims, dst.dims)]
    for c, f in zip(coeffs, maps):
        c = int(c) % p
        if c:
            for v, m in enumerate(f.comps):
                comps[v] = (comps[v] + c * m) % p
    return RepMap(src, dst, tuple(comps))


def is_module_map(f: RepMap, p: int) -> bool:
    for a, (s, t) in enumerate(f.src.quiver.arrows):
        lhs = la.matmul(f.comps[t], f.src.mats[a], p)
        rhs = la.matmul(f.dst.mats[a], f.comps[s], p)
        if not np.array_equal(lhs, rhs):
            return False
    return True


def _commutation_system(m: Rep, n: Rep, p: int) -> np.ndarray:
    offs = np.cumsum([0] + [a * b for a, b in zip(m.dims, n.dims)])
    total = int(offs[-1])
    rows = []
    for a, (s, t) in enumerate(m.quiver.arrows):
        nt, ms = n.dims[t], m.dims[s]
        if nt * ms == 0:
            continue
        block = la.zeros(nt * ms, total)
        # phi_t M_a - N_a phi_s, row-major vectorisation
        block[:, offs[t]:offs[t + 1]] += np.kron(la.identity(nt), m.mats[a].T)
        block[:, offs[s]:offs[s + 1]] -= np.kron(n.mats[a], la.identity(ms))
        rows.append(block % p)
    if not rows:
        return la.zeros(0, total)
    return np.concatenate(rows)


def hom_basis(m: Rep, n: Rep, p: int) -> list[RepMap]:
    sysm = _commutation_system(m, n, p)
    k = la.kernel_basis(sysm, p)
    return [map_from_vec(m, n, k[:, j]) for j in range(k.shape[1])]


def solve_map(m: Rep, n: Rep, terms: Sequence[tuple[RepMap | None, RepMap | None]],
              rhs: RepMap, p: int) -> RepMap:
    """A module map ``u: m -> n`` with ``sum X u Y = rhs`` over ``terms``.

    ``X`` (or ``Y``) may be ``None`` for an identity.  Raises ``NoSolution``.
    """
    offs = np.cumsum([0] + [a * b for a, b in zip(m.dims, n.dims)])
    total = int(offs[-1])
    blocks = [_commutation_system(m, n, p)]
    targets = [la.zeros(blocks[0].shape[0], 1)]
    for v in range(m.quiver.n_vertices):
        zv = rhs.comps[v]
        if zv.size == 0:
            continue
        block = la.zeros(zv.size, total)
        for x, y in terms:
            xv = la.identity(n.dims[v]) if x is None else x.comps[v]
            yv = la.identity(m.dims[v]) if y is None else y.comps[v]
            block[:, offs[v]:offs[v + 1]] += np.kron(xv, yv.T)
        blocks.append(block % p)
        targets.append(zv.reshape(-1, 1))
    sol = la.solve(np.concatenate(blocks), np.concatenate(targets), p)
    return map_from_vec(m, n, sol[:, 0])


def direct_sum(reps: Sequence[Rep], q: Quiver) -> Rep:
    dims = tuple(sum(r.dims[v] for r in reps) for v in range(q.n_vertices))
    mats = []
    for a, (s, t) in enumerate(q.arrows):
        mats.append(la.block_matrix(
            [[r.mats[a] if i == j else None for j, r in enumerate(reps)]
             for i, _ in enumerate(reps)],
            [r.dims[t] for r in reps], [r.dims[s] for r in reps]))
    return Rep(q, dims, tuple(mats))


def block_map(src_parts: Sequence[Rep], dst_parts: Sequence[Rep],
              blocks: Sequence[Sequence[RepMap | None]], src: Rep, dst: Rep) -> RepMap:
    """Assemble a map between direct sums from its (dst, src) blocks."""
    comps = []
    for v in range(src.quiver.n_vertices):
        comps.append(la.block_matrix(
            [[None if blocks[i][j] is None else blocks[i][j].comps[v]
              for j in range(len(src_parts))] for i in range(len(dst_parts))],
            [r.dims[v] for r in dst_parts], [r.dims[v] for r in src_parts]))
    return RepMap(src, dst, tuple(comps))


def sub_block(f: RepMap, src_parts: Sequence[Rep], dst_parts: Sequence[Rep],
              i: int, j: int) -> RepMap:
    comps = []
    for v in range(f.src.quiver.n_vertices):
        r0 = sum(r.dims[v] for r in dst_parts[:i])
        c0 = sum(r.dims[v] for r in src_parts[:j])
        comps.append(f.comps[v][r0:r0 + dst_parts[i].dims[v], c0:c0 + src_parts[j].dims[v]].copy())
    return RepMap(src_parts[j], dst_parts[i], tuple(comps))


def kernel(f: RepMap, p: int) -> tuple[Rep, RepMap]:
    m = f.src
    bases = [la.kernel_basis(c, p) if c.shape[0] else la.identity(c.shape[1]) for c in f.comps]
    dims = tuple(b.shape[1] for b in bases)
    mats = []
    for a, (s, t) in enumerate(m.quiver.arrows):
        img = la.matmul(m.mats[a], bases[s], p)
        if dims[t] == 0 or dims[s] == 0:
            mats.append(la.zeros(dims[t], dims[s]))
        else:
            mats.append(la.solve(bases[t], img, p))
    k = Rep(m.quiver, dims, tuple(mats))
    return k, RepMap(k, m, tuple(bases))


def cokernel(f: RepMap, p: int) -> tuple[Rep, RepMap]:
    n = f.dst
    projs = [la.cokernel(c, p)[0] if c.shape[1] else la.identity(c.shape[0]) for c in f.comps]
    dims = tuple(pr.shape[0] for pr in projs)
    mats = []
    for a, (s, t) in enumerate(n.quiver.arrows):
        if dims[t] == 0 or dims[s] == 0:
            mats.append(la.zeros(dims[t], dims[s]))
            continue
        sec = la.right_inverse(projs[s], p)
        mats.append(la.matmul(la.matmul(projs[t], n.mats[a], p), sec, p))
    q = Rep(n.quiver, dims, tuple(mats))
    return q, RepMap(n, q, tuple(projs))


def is_injective(f: RepMap, p: int) -> bool:
    return all(la.rank(c, p) == c.shape[1] for c in f.comps)


def is_surjective(f: RepMap, p: int) -> bool:
    return all(la.rank(c, p) == c.shape[0] for c in f.comps)


def is_iso(f: RepMap, p: int) -> bool:
    return all(c.shape[0] == c.shape[1] and la.rank(c, p) == c.shape[0] for c in f.comps)


def invert(f: RepMap, p: int) -> RepMap:
    return RepMap(f.dst, f.src, tuple(la.inverse(c, p) for c in f.comps))


def is_exact_at(f: RepMap, g: RepMap, p: int) -> bool:
    """ker g = im f, vertexwise."""
    for a, b in zip(f.comps, g.comps):
        if la.matmul(b, a, p).any():
            return False
        rk_b = la.rank(b, p) if b.size else 0
        rk_a = la.rank(a, p) if a.size else 0
        if b.shape[1] - rk_b != rk_a:
            return False
    return True


class DecompositionError(RuntimeError):
    pass


def decompose(m: Rep, types: Sequence[Rep], tops: Sequence[Callable[[RepMap], int]],
              p: int) -> tuple[list[int], RepMap]:
    """Split ``m`` into standard indecomposables.

    ``types`` are pairwise non-isomorphic indecomposables with local
    endomorphism rings of residue field F_p, and ``tops[k]`` is the residue
    functional End(types[k]) -> F_p.  The multiplicity of type k is the rank of
    the pairing (b, a) -> top(b a) on Hom(M, I) x Hom(I, M).  Returns the sorted
    list of type ids and an isomorphism from their direct sum onto ``m``.
    """
    ids: list[int] = []
    pieces: list[RepMap] = []
    for k, (typ, top) in enumerate(zip(types, tops)):
        if m.total_dim == 0:
            break
        ins = hom_basis(typ, m, p)
        if not ins:
            continue
        outs = hom_basis(m, typ, p)
        if not outs:
            continue
        pair = np.array([[top(compose(b, a, p)) for a in ins] for b in outs],
                        dtype=np.int64) % p
        _, cols = la.rref_pivots(pair, p)
        for c in cols:
            ids.append(k)
            pieces.append(ins[c])
    total = sum(types[k].total_dim for k in ids)
    if total != m.total_dim:
        raise DecompositionError(
            f"multiplicities account for dimension {total}, module has {m.total_dim}")
    parts = [types[k] for k in ids]
    std = direct_sum(parts, m.quiver)
    alpha = block_map(parts, [m], [pieces], std, m)
    if not is_iso(alpha, p):
        raise DecompositionError("assembled summand inclusions are not an isomorphism")
    return ids, alpha

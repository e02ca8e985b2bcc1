"""The stable module category of F_p[x]/(x^n).

Modules are representations of the one-loop quiver with ``x`` nilpotent of
order dividing ``n``.  ``M_i = k[x]/(x^i)`` has basis ``e_k = x^k`` and
``x e_k = e_{k+1}``; ``M_n`` is free (projective-injective) and becomes zero
stably.  Extensions are ``E(C, A) = Hom_st(C, Omega^-1 A)`` with
``Omega^-1 M_i = M_{n-i}``; an element ``phi: C -> Omega^-1 A`` is realized by
pulling back ``0 -> A -> I -> Omega^-1 A -> 0`` along ``phi``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .. import linalg as la
from .. import reps as rp
from ..category import BasedCategory, ExtElem, Obj
from .base import CoordExtractor, ModSeq, ModuleBackend, stable_complement


@dataclass(frozen=True)
class StmodSpec:
    n: int
    p: int = 2

    def __post_init__(self):
        if not isinstance(self.n, int) or not 3 <= self.n <= 5:
            raise ValueError(f"stmod backend needs 3 <= n <= 5, got {self.n!r}")
        la.FieldSpec(self.p)


class StmodBackend(ModuleBackend):
    def __init__(self, spec: StmodSpec):
        super().__init__(rp.Quiver(1, ((0, 0),)), spec.p)
        self.spec = spec
        n = spec.n
        self.types = [self._cyclic(i) for i in range(1, n + 1)]
        self.tops = [lambda f: int(f.comps[0][0, 0])] * n
        self.free = n - 1
        self.cat_of_type = list(range(n - 1)) + [None]
        self.type_of_cat = list(range(n - 1))
        self._homs = {}
        self._hulls = {}

    def _cyclic(self, i: int) -> rp.Rep:
        x = la.zeros(i, i)
        for k in range(i - 1):
            x[k + 1, k] = 1
        return rp.Rep(self.quiver, (i,), (x,))

    def length(self, k: int) -> int:
        return k + 1

    def sigma(self, i: int) -> int:
        """Category id of ``Omega^-1 M``; ``M_{i+1} -> M_{n-i-1}``."""
        return self.spec.n - 2 - i

    # ------------------------------------------------------------------ homs
    def _hom(self, i: int, j: int):
        if (i, j) not in self._homs:
            p = self.p
            m, n = self.types[i], self.types[j]
            amb = rp.hom_ambient_dim(m, n)
            free = self.types[self.free]
            through = [rp.compose(b, a, p).vec()
                       for a in rp.hom_basis(m, free, p) for b in rp.hom_basis(free, n, p)]
            ideal = la.Subspace.span(np.stack(through), p, amb).matrix if through else la.zeros(0, amb)
            full = rp.hom_basis(m, n, p)
            reps = [full[c] for c in stable_complement([f.vec() for f in full], ideal, p)]
            self._homs[i, j] = (reps, CoordExtractor(reps, ideal, amb, p))
        return self._homs[i, j]

    def hom_reps(self, i, j):
        return self._hom(i, j)[0]

    def hom_coords(self, i, j, f):
        return self._hom(i, j)[1](f)

    # ------------------------------------------------------- injective hulls
    def hull(self, k: int) -> rp.RepMap:
        """``M_{k+1} -> M_n``, ``e_c -> e_{n-k-1+c}``."""
        n = self.spec.n
        m = la.zeros(n, k + 1)
        for c in range(k + 1):
            m[n - k - 1 + c, c] = 1
        return rp.RepMap(self.types[k], self.types[self.free], (m,))

    def quotient(self, k: int) -> rp.RepMap:
        """``M_n -> M_{k+1}``, ``e_c -> e_c``."""
        m = la.zeros(k + 1, self.spec.n)
        for c in range(k + 1):
            m[c, c] = 1
        return rp.RepMap(self.types[self.free], self.types[k], (m,))

    def cosyzygy(self, a: rp.RepMap, k: int, k2: int) -> rp.RepMap:
        """``Omega^-1 a: M_{n-k-1} -> M_{n-k2-1}`` for ``a: M_{k+1} -> M_{k2+1}``."""
        p = self.p
        free = self.types[self.free]
        ext = rp.solve_map(free, free, [(None, self.hull(k))], rp.compose(self.hull(k2), a, p), p)
        s, s2 = self.sigma(k), self.sigma(k2)
        return rp.solve_map(self.types[s], self.types[s2], [(None, self.quotient(s))],
                            rp.compose(self.quotient(s2), ext, p), p)

    # ------------------------------------------------------------------- ext
    def ext_dim(self, j, i):
        return len(self.hom_reps(j, self.sigma(i)))

    def ext_reps(self, j, i):
        return self.hom_reps(j, self.sigma(i))

    def ext_coords(self, j, i, phi):
        return self.hom_coords(j, self.sigma(i), phi)

    def left_action(self, j, i, i2):
        d1, d2 = self.ext_dim(j, i), self.ext_dim(j, i2)
        hom = self.hom_reps(i, i2)
        out = np.zeros((len(hom), d2, d1), dtype=np.int64)
        if d1 and d2:
            for k, a in enumerate(hom):
                sa = self.cosyzygy(a, i, i2)
                for c, phi in enumerate(self.ext_reps(j, i)):
                    out[k, :, c] = self.ext_coords(j, i2, rp.compose(sa, phi, self.p))
        return out

    def right_action(self, j, j2, i):
        d1, d2 = self.ext_dim(j, i), self.ext_dim(j2, i)
        hom = self.hom_reps(j2, j)
        out = np.zeros((len(hom), d2, d1), dtype=np.int64)
        if d1 and d2:
            for k, c in enumerate(hom):
                for col, phi in enumerate(self.ext_reps(j, i)):
                    out[k, :, col] = self.ext_coords(j2, i, rp.compose(phi, c, self.p))
        return out

    def suspension_hom(self, i: int, j: int) -> np.ndarray:
        hom = self.hom_reps(i, j)
        si, sj = self.sigma(i), self.sigma(j)
        out = la.zeros(len(self.hom_reps(si, sj)), len(hom))
        for k, a in enumerate(hom):
            out[:, k] = self.hom_coords(si, sj, self.cosyzygy(a, i, j))
        return out

    # -------------------------------------------------------------- triangles
    def _hull_data(self, a_types: tuple[int, ...]):
        """Block injective hull ``A -> I`` and quotient ``I -> Omega^-1 A`` (free summands dropped)."""
        if a_types in self._hulls:
            return self._hulls[a_types]
        p = self.p
        free = self.types[self.free]
        aparts = [self.types[k] for k in a_types]
        iparts = [free] * len(a_types)
        omega_types = tuple(self.sigma(k) for k in a_types if k != self.free)
        oparts = [self.types[k] for k in omega_types]
        astd, istd, ostd = self.std(a_types), self.std((self.free,) * len(a_types)), self.std(omega_types)
        r = len(a_types)
        iota = rp.block_map(aparts, iparts, [[(rp.identity_map(free) if k == self.free else self.hull(k))
                                              if a == b else None for b, k in enumerate(a_types)]
                                             for a in range(r)], astd, istd)
        nonfree = [a for a, k in enumerate(a_types) if k != self.free]
        rows = [[self.quotient(self.sigma(a_types[a])) if b == a else None for b in range(r)]
                for a in nonfree]
        pi = rp.block_map(iparts, oparts, rows, istd, ostd)
        self._hulls[a_types] = (iota, pi, omega_types, nonfree)
        return self._hulls[a_types]

    def realize_module(self, d):
        p = self.p
        at, ct = self.types_of(d.a_obj), self.types_of(d.c_obj)
        iota, pi, omega_types, _ = self._hull_data(at)
        istd, cstd, ostd = iota.dst, self.std(ct), self.std(omega_types)
        cparts = [self.types[k] for k in ct]
        oparts = [self.types[k] for k in omega_types]
        phi = rp.block_map(cparts, oparts,
                           [[rp.combine(d.block(r, t), self.ext_reps(d.c_obj.summands[r], d.a_obj.summands[t]),
                                        cparts[r], oparts[t], p) for r in range(len(ct))]
                            for t in range(len(at))], cstd, ostd)
        sstd = self.std((self.free,) * len(at) + ct)
        h = rp.block_map([istd, cstd], [ostd], [[pi, rp.scale(-1, phi, p)]], sstd, ostd)
        b, k = rp.kernel(h, p)
        astd = self.std(at)
        rhs = rp.block_map([astd], [istd, cstd], [[iota], [None]], astd, sstd)
        f = rp.solve_map(astd, b, [(k, None)], rhs, p)
        pr = rp.block_map([istd, cstd], [cstd], [[None, rp.identity_map(cstd)]], sstd, cstd)
        return b, f, rp.compose(pr, k, p)

    def classify(self, seq: ModSeq) -> ExtElem:
        p = self.p
        iota, pi, omega_types, nonfree = self._hull_data(seq.a_types)
        bstd, cstd, ostd = seq.f.dst, self.std(seq.c_types), self.std(omega_types)
        e = rp.solve_map(bstd, iota.dst, [(None, seq.f)], iota, p)
        phi = rp.solve_map(cstd, ostd, [(None, seq.g)], rp.compose(pi, e, p), p)
        cparts = [self.types[k] for k in seq.c_types]
        oparts = [self.types[k] for k in omega_types]
        c_obj, a_obj = self.obj_of(seq.c_types), self.obj_of(seq.a_types)
        c_pos = [r for r, k in enumerate(seq.c_types) if k != self.free]
        out = self.cat.ext_elem(c_obj, a_obj)
        offs = out.offsets()
        for r, rpos in enumerate(c_pos):
            for t, _ in enumerate(nonfree):
                lo, hi = offs[r, t]
                out.coords[lo:hi] = self.ext_coords(c_obj.summands[r], a_obj.summands[t],
                                                    rp.sub_block(phi, cparts, oparts, t, rpos))
        return out

    def make_epi(self, h, b_types, d_types):
        p = self.p
        dparts = [self.types[k] for k in d_types]
        free = self.types[self.free]
        bt2 = tuple(b_types) + (self.free,) * len(d_types)
        r = len(d_types)
        cover = rp.block_map([free] * r, dparts, [[self.quotient(k) if a == b else None
                                                   for b in range(r)] for a, k in enumerate(d_types)],
                             self.std((self.free,) * r), self.std(d_types))
        bstd, fstd = self.std(b_types), self.std((self.free,) * r)
        dstd = self.std(d_types)
        h2 = rp.block_map([bstd, fstd], [dstd], [[h, cover]], self.std(bt2), dstd)
        return bt2, h2


def build_stmod_category(spec: StmodSpec) -> BasedCategory:
    be = StmodBackend(spec)
    m = spec.n - 1
    names = [f"M{i}" for i in range(1, m + 1)]
    aliases = [(f"M_{i}",) for i in range(1, m + 1)]
    label = f"stmod n={spec.n} p={spec.p}"
    return be.build(label, names, aliases, projective=[False] * m,
                    suspension=[be.sigma(i) for i in range(m)], suspension_hom=be.suspension_hom)


def suspend(cat: BasedCategory, x: Obj, times: int = 1) -> Obj:
    if cat.suspension is None:
        from ..category import CategoryError
        raise CategoryError("this category has no suspension functor")
    out = list(x.summands)
    for _ in range(times % _order(cat)):
        out = [cat.suspension[i] for i in out]
    return Obj(tuple(out))


def _order(cat: BasedCategory) -> int:
    s = cat.suspension
    k, cur = 1, list(s)
    while cur != list(range(len(s))):
        cur = [s[i] for i in cur]
        k += 1
    return k

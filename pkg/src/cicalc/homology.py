"""Ext and Tor against finite length modules, by graded linear algebra.

For a resolution F and a finite dimensional quotient N = P^r/U (with f in
U), Hom(F_i, N) and F_i (x) N are finite dimensional and split into
internal degrees, so ranks are taken block by block.
"""
from __future__ import annotations

from typing import Sequence

import numpy as np

from . import modp
from .poly import FreeSubmodule
from .ring import QuotientSpace


class GradedQuotient:
    """A finite dimensional graded quotient with degree blocks and cached multiplication."""

    def __init__(self, Q: QuotientSpace):
        self.Q = Q
        self.p = Q.p
        degs = [int(d) for d in Q.degrees]
        self.blocks: dict[int, slice] = {}
        for d in sorted(set(degs)):
            idx = [k for k, x in enumerate(degs) if x == d]
            self.blocks[d] = slice(idx[0], idx[-1] + 1)
        self._poly: dict = {}

    def dim(self, d: int) -> int:
        s = self.blocks.get(d)
        return 0 if s is None else s.stop - s.start

    def total_dim(self) -> int:
        return self.Q.dim

    def mult(self, g: dict, src: int, tgt: int) -> np.ndarray:
        """Block of multiplication by g from degree src to degree tgt."""
        key = tuple(sorted(g.items()))
        m = self._poly.get(key)
        if m is None:
            m = self.Q.poly_matrix(g)
            self._poly[key] = m
        return m[self.blocks[tgt], self.blocks[src]]


def quotient_of(A, rank: int, shifts, extra) -> GradedQuotient:
    U = FreeSubmodule(A.P, rank, list(extra) + A.fcols(rank), shifts)
    return GradedQuotient(QuotientSpace(U, A.order))


def _entries(H):
    ents = [[{} for _ in H.cols] for _ in H.row_degs]
    for j, col in enumerate(H.cols):
        for (i, e), c in col.items():
            ents[i][j][e] = c
    return ents


def hom_block(H, N: GradedQuotient, e: int) -> np.ndarray:
    """Degree e part of Hom(H, N): Hom(target, N)_e -> Hom(source, N)_e.

    H is an HMatrix target <- source.  phi maps generator k of the target to
    N_{a_k + e}; the image sends generator j of the source to sum_k H[k][j] phi_k.
    """
    ents = _entries(H)
    rows_in = [(k, a) for k, a in enumerate(H.row_degs) if N.dim(a + e)]
    cols_out = [(j, b) for j, b in enumerate(H.col_degs) if N.dim(b + e)]
    rsz = sum(N.dim(b + e) for _, b in cols_out)
    csz = sum(N.dim(a + e) for _, a in rows_in)
    m = np.zeros((rsz, csz), dtype=np.int64)
    r0 = 0
    for j, b in cols_out:
        h = N.dim(b + e)
        c0 = 0
        for k, a in rows_in:
            w = N.dim(a + e)
            g = ents[k][j]
            if g:
                m[r0 : r0 + h, c0 : c0 + w] = N.mult(g, a + e, b + e)
            c0 += w
        r0 += h
    return m


def tensor_block(H, N: GradedQuotient, e: int) -> np.ndarray:
    """Degree e part of H (x) N: (source (x) N)_e -> (target (x) N)_e.

    Generator j of the source (degree b) carries N_{e-b}.
    """
    ents = _entries(H)
    srcs = [(j, b) for j, b in enumerate(H.col_degs) if N.dim(e - b)]
    tgts = [(k, a) for k, a in enumerate(H.row_degs) if N.dim(e - a)]
    rsz = sum(N.dim(e - a) for _, a in tgts)
    csz = sum(N.dim(e - b) for _, b in srcs)
    m = np.zeros((rsz, csz), dtype=np.int64)
    c0 = 0
    for j, b in srcs:
        w = N.dim(e - b)
        r0 = 0
        for k, a in tgts:
            h = N.dim(e - a)
            g = ents[k][j]
            if g:
                m[r0 : r0 + h, c0 : c0 + w] = N.mult(g, e - b, e - a)
            r0 += h
        c0 += w
    return m


def _hom_degrees(degs: Sequence[int], N: GradedQuotient) -> set:
    return {d - a for a in degs for d in N.blocks}


def _tensor_degrees(degs: Sequence[int], N: GradedQuotient) -> set:
    return {d + a for a in degs for d in N.blocks}


def _cdim_hom(degs, N, e):
    return sum(N.dim(a + e) for a in degs)


def _cdim_tensor(degs, N, e):
    return sum(N.dim(e - a) for a in degs)


def ext_lengths(res, N: GradedQuotient, imax: int, imin: int = 0) -> list[int]:
    """[l(Ext^i(M, N)) for imin <= i <= imax] from the resolution."""
    if imax + 1 > res.cutoff:
        raise ValueError(f"need a resolution to homological degree {imax + 1}, have {res.cutoff}")
    p = N.p
    rank_cache: dict = {}

    def rk(i, e):
        # rank of d^i : Hom(F_{i-1}, N) -> Hom(F_i, N) in degree e
        if i < 1:
            return 0
        key = (i, e)
        if key not in rank_cache:
            H = res.diffs[i]
            if not H.cols or not H.row_degs:
                rank_cache[key] = 0
            else:
                rank_cache[key] = modp.rank(hom_block(H, N, e), p)
        return rank_cache[key]

    out = []
    for i in range(imin, imax + 1):
        tot = 0
        for e in _hom_degrees(res.degrees[i], N):
            tot += _cdim_hom(res.degrees[i], N, e) - rk(i + 1, e) - rk(i, e)
        out.append(tot)
    return out


def tor_lengths(res, N: GradedQuotient, imax: int, imin: int = 0) -> list[int]:
    """[l(Tor_i(M, N)) for imin <= i <= imax]."""
    if imax + 1 > res.cutoff:
        raise ValueError(f"need a resolution to homological degree {imax + 1}, have {res.cutoff}")
    p = N.p
    rank_cache: dict = {}

    def rk(i, e):
        # rank of d_i (x) N : F_i (x) N -> F_{i-1} (x) N in degree e
        if i < 1:
            return 0
        key = (i, e)
        if key not in rank_cache:
            H = res.diffs[i]
            if not H.cols or not H.row_degs:
                rank_cache[key] = 0
            else:
                rank_cache[key] = modp.rank(tensor_block(H, N, e), p)
        return rank_cache[key]

    out = []
    for i in range(imin, imax + 1):
        tot = 0
        for e in _tensor_degrees(res.degrees[i], N):
            tot += _cdim_tensor(res.degrees[i], N, e) - rk(i, e) - rk(i + 1, e)
        out.append(tot)
    return out


def hom_matrix(H, N: GradedQuotient) -> np.ndarray:
    """Ungraded Hom(H, N) as one matrix (all degrees), block diagonal by degree order."""
    Q = N.Q
    ents = _entries(H)
    n = Q.dim
    m = np.zeros((len(H.col_degs) * n, len(H.row_degs) * n), dtype=np.int64)
    for j in range(len(H.col_degs)):
        for k in range(len(H.row_degs)):
            g = ents[k][j]
            if g:
                m[j * n : (j + 1) * n, k * n : (k + 1) * n] = Q.poly_matrix(g)
    return m

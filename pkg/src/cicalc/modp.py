"""Dense linear algebra over a prime field F_p.

Matrices are numpy int64 arrays with entries in [0, p).  p must be below
2**31 so that products of two residues fit in an int64.
"""
from __future__ import annotations

import numpy as np

MAX_PRIME = 2**31 - 1


def as_mat(a, p: int, shape: tuple[int, int] | None = None) -> np.ndarray:
    m = np.asarray(a, dtype=np.int64)
    if shape is not None and m.size == 0:
        m = m.reshape(shape)
    return m % p


def matmul(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    """(a @ b) mod p; goes through float64 BLAS when the sums are exactly representable."""
    if a.shape[1] * (p - 1) ** 2 < 2**53:
        return (a.astype(np.float64) @ b.astype(np.float64)).astype(np.int64) % p
    return (a % p) @ (b % p) % p


def rref(a: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form and pivot columns."""
    m = np.array(a, dtype=np.int64) % p
    rows, cols = m.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(m[r:, c])[0]
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            m[[r, piv]] = m[[piv, r]]
        inv = pow(int(m[r, c]), -1, p)
        m[r] = (m[r] * inv) % p
        col = m[:, c].copy()
        col[r] = 0
        hit = np.nonzero(col)[0]
        if hit.size:
            m[hit] = (m[hit] - np.outer(col[hit], m[r])) % p
        pivots.append(c)
        r += 1
    return m[:r], pivots


def rank(a: np.ndarray, p: int) -> int:
    a = np.asarray(a)
    if a.size == 0:
        return 0
    # eliminate along the shorter side
    if a.shape[0] > a.shape[1]:
        a = a.T
    return len(rref(a, p)[1])


def nullspace(a: np.ndarray, p: int) -> np.ndarray:
    """Basis of {v : a v = 0} as the columns of the returned matrix."""
    a = np.asarray(a, dtype=np.int64)
    n = a.shape[1]
    if a.shape[0] == 0 or a.size == 0:
        return np.eye(n, dtype=np.int64)
    r, piv = rref(a, p)
    free = [j for j in range(n) if j not in set(piv)]
    basis = np.zeros((n, len(free)), dtype=np.int64)
    for k, j in enumerate(free):
        basis[j, k] = 1
        for i, pc in enumerate(piv):
            basis[pc, k] = (-r[i, j]) % p
    return basis


def row_basis(a: np.ndarray, p: int) -> np.ndarray:
    """Rows of the rref: a canonical basis of the row space."""
    a = np.asarray(a, dtype=np.int64)
    if a.size == 0:
        return np.zeros((0, a.shape[1] if a.ndim == 2 else 0), dtype=np.int64)
    return rref(a, p)[0]


def col_basis(a: np.ndarray, p: int) -> np.ndarray:
    """Canonical basis (as columns) of the column space."""
    return row_basis(np.asarray(a).T, p).T


def solve(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray | None:
    """One solution x of a x = b (b may have several columns), or None."""
    a = np.asarray(a, dtype=np.int64) % p
    b = np.asarray(b, dtype=np.int64) % p
    vec = b.ndim == 1
    if vec:
        b = b[:, None]
    rows, n = a.shape
    if rows == 0:
        return np.zeros((n,) if vec else (n, b.shape[1]), dtype=np.int64)
    aug = np.concatenate([a, b], axis=1)
    r, piv = rref(aug, p)
    if any(c >= n for c in piv):
        return None
    x = np.zeros((n, b.shape[1]), dtype=np.int64)
    for i, c in enumerate(piv):
        x[c] = r[i, n:]
    return x[:, 0] if vec else x


def in_span(basis_cols: np.ndarray, v: np.ndarray, p: int) -> bool:
    if basis_cols.size == 0:
        return not np.any(np.asarray(v) % p)
    return rank(np.column_stack([basis_cols, v]), p) == rank(basis_cols, p)


def intersect_spaces(u: np.ndarray, v: np.ndarray, p: int) -> np.ndarray:
    """Columns spanning col(u) ∩ col(v)."""
    dim = u.shape[0]
    if u.shape[1] == 0 or v.shape[1] == 0:
        return np.zeros((dim, 0), dtype=np.int64)
    ker = nullspace(np.concatenate([u, (-v) % p], axis=1), p)
    if ker.shape[1] == 0:
        return np.zeros((dim, 0), dtype=np.int64)
    return col_basis((u @ ker[: u.shape[1]]) % p, p)


def complement_projection(sub: np.ndarray, dim: int, p: int) -> tuple[np.ndarray, np.ndarray]:
    """Coordinates on V / col(sub).

    Returns (proj, lift): proj is a (q x dim) matrix whose kernel is col(sub),
    lift is a (dim x q) matrix with proj @ lift = identity.
    """
    if sub.size == 0 or sub.shape[1] == 0:
        eye = np.eye(dim, dtype=np.int64)
        return eye, eye
    r, piv = rref(sub.T, p)
    free = [j for j in range(dim) if j not in set(piv)]
    q = len(free)
    # reduce a vector by the echelon rows, then read off free coordinates
    proj = np.zeros((q, dim), dtype=np.int64)
    for j in range(dim):
        e = np.zeros(dim, dtype=np.int64)
        e[j] = 1
        for i, c in enumerate(piv):
            if e[c]:
                e = (e - e[c] * r[i]) % p
        proj[:, j] = e[free]
    lift = np.zeros((dim, q), dtype=np.int64)
    for k, j in enumerate(free):
        lift[j, k] = 1
    return proj % p, lift

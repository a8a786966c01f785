"""Dense linear algebra over prime fields (numpy int64) and over Q."""

from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Iterator, Optional, Sequence

import numpy as np


def _as_mod(M, p: int) -> np.ndarray:
    A = np.array(M, dtype=np.int64, copy=True)
    if A.ndim == 1:
        A = A.reshape(1, -1)
    return A % p


def rref_mod(M, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form mod p.  Returns (R, pivot columns)."""
    A = _as_mod(M, p)
    rows, cols = A.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(A[r:, c])
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            A[[r, piv]] = A[[piv, r]]
        inv = pow(int(A[r, c]), -1, p)
        if inv != 1:
            A[r] = (A[r] * inv) % p
        col = A[:, c].copy()
        col[r] = 0
        hit = np.flatnonzero(col)
        if hit.size:
            A[hit] = (A[hit] - np.outer(col[hit], A[r])) % p
        pivots.append(c)
        r += 1
    return A[:r], pivots


def rank_mod(M, p: int) -> int:
    A = np.asarray(M)
    if A.size == 0:
        return 0
    return len(rref_mod(A, p)[1])


def nullspace_mod(M, p: int, ncols: Optional[int] = None) -> np.ndarray:
    """Basis (as rows) of {x : M x = 0} over F_p."""
    A = np.asarray(M, dtype=np.int64)
    if A.size == 0:
        n = ncols if ncols is not None else (A.shape[1] if A.ndim == 2 else 0)
        return np.eye(n, dtype=np.int64)
    R, pivots = rref_mod(A, p)
    n = R.shape[1]
    free = [c for c in range(n) if c not in set(pivots)]
    basis = np.zeros((len(free), n), dtype=np.int64)
    for k, f in enumerate(free):
        basis[k, f] = 1
        for i, pc in enumerate(pivots):
            basis[k, pc] = (-R[i, f]) % p
    return basis


def solve_mod(M, b, p: int) -> Optional[np.ndarray]:
    """One solution of M x = b over F_p, or None if inconsistent."""
    A = np.asarray(M, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64).reshape(-1, 1)
    n = A.shape[1]
    if A.shape[0] == 0:
        return np.zeros(n, dtype=np.int64)
    R, pivots = rref_mod(np.hstack([A, b]), p)
    if pivots and pivots[-1] == n:
        return None
    x = np.zeros(n, dtype=np.int64)
    for i, pc in enumerate(pivots):
        x[pc] = R[i, n]
    return x


def affine_solutions(M, b, p: int) -> Iterator[np.ndarray]:
    """Iterate every solution of M x = b over F_p (deterministic order)."""
    x0 = solve_mod(M, b, p)
    if x0 is None:
        return
    N = nullspace_mod(M, p, ncols=len(x0))
    if len(N) == 0:
        yield x0
        return
    for coeffs in itertools.product(range(p), repeat=len(N)):
        yield (x0 + np.asarray(coeffs, dtype=np.int64) @ N) % p


def inverse_mod(M, p: int) -> np.ndarray:
    A = _as_mod(M, p)
    n = A.shape[0]
    if A.shape != (n, n):
        raise ValueError("matrix is not square")
    R, pivots = rref_mod(np.hstack([A, np.eye(n, dtype=np.int64)]), p)
    if pivots[:n] != list(range(n)):
        raise ValueError("matrix is singular")
    return R[:n, n:]


def rank_rational(M: Sequence[Sequence[int]]) -> int:
    """Exact rank over Q by fraction-free Gaussian elimination."""
    rows = [[Fraction(int(v)) for v in row] for row in M]
    if not rows:
        return 0
    ncols = len(rows[0])
    rank = 0
    for c in range(ncols):
        piv = next((i for i in range(rank, len(rows)) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        pr = rows[rank]
        for i in range(len(rows)):
            if i != rank and rows[i][c] != 0:
                f = rows[i][c] / pr[c]
                rows[i] = [a - f * b for a, b in zip(rows[i], pr)]
        rank += 1
        if rank == len(rows):
            break
    return rank


def det_integer(M: Sequence[Sequence[int]]) -> int:
    """Exact integer determinant (Bareiss)."""
    A = [[int(v) for v in row] for row in M]
    n = len(A)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if A[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if A[i][k] != 0), None)
            if swap is None:
                return 0
            A[k], A[swap] = A[swap], A[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    return sign * A[n - 1][n - 1]

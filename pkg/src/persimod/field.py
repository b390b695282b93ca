"""
Dense exact linear algebra over a prime field F_p (default p = 2).

Matrices are numpy int64 arrays with entries reduced mod p.  All
elimination uses a fixed pivot order (first nonzero entry in column
scan) so reduced bases are reproducible across runs.
"""

from __future__ import annotations

import numpy as np

DEFAULT_P = 2

_SMALL_PRIMES = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47}


def is_prime(p: int) -> bool:
    if p in _SMALL_PRIMES:
        return True
    if p < 2:
        return False
    return all(p % q for q in range(2, int(p ** 0.5) + 1))


def check_characteristic(p: int) -> int:
    if not is_prime(p):
        raise ValueError(f"field characteristic must be prime, got {p}")
    return p


def asfield(m, p: int = DEFAULT_P) -> np.ndarray:
    """Copy *m* into an int64 array with entries reduced mod p."""
    a = np.array(m, dtype=np.int64)
    if a.ndim == 1:
        a = a.reshape(-1, 1)
    return np.mod(a, p)


def inv_mod(x: int, p: int) -> int:
    return pow(int(x) % p, p - 2, p)


def zeros(rows: int, cols: int) -> np.ndarray:
    return np.zeros((rows, cols), dtype=np.int64)


def eye(n: int) -> np.ndarray:
    return np.eye(n, dtype=np.int64)


def matmul(a: np.ndarray, b: np.ndarray, p: int = DEFAULT_P) -> np.ndarray:
    """Product over F_p.  Uses object dtype above the int64-safe bound."""
    if a.shape[1] != b.shape[0]:
        raise ValueError(f"shape mismatch {a.shape} @ {b.shape}")
    # Worst-case accumulator: inner * (p-1)^2 must not overflow int64.
    if a.shape[1] * (p - 1) ** 2 < 2 ** 62:
        return np.mod(a @ b, p)
    return np.mod(a.astype(object) @ b.astype(object), p).astype(np.int64)


def row_echelon(m: np.ndarray, p: int = DEFAULT_P):
    """Row-reduce over F_p.

    Returns (R, pivot_cols) with R in reduced row-echelon form (pivots
    normalised to 1, eliminated above and below).
    """
    r = np.mod(np.array(m, dtype=np.int64), p)
    n_rows, n_cols = r.shape
    pivot_cols: list[int] = []
    row = 0
    for col in range(n_cols):
        if row == n_rows:
            break
        hits = np.nonzero(r[row:, col])[0]
        if hits.size == 0:
            continue
        pr = row + int(hits[0])
        if pr != row:
            r[[row, pr]] = r[[pr, row]]
        r[row] = np.mod(r[row] * inv_mod(r[row, col], p), p)
        others = np.nonzero(r[:, col])[0]
        for i in others:
            if i != row:
                r[i] = np.mod(r[i] - r[i, col] * r[row], p)
        pivot_cols.append(col)
        row += 1
    return r, pivot_cols


def rank(m: np.ndarray, p: int = DEFAULT_P) -> int:
    """Rank over F_p via Gaussian elimination."""
    if m.size == 0:
        return 0
    return len(row_echelon(m, p)[1])


def in_span(v: np.ndarray, m: np.ndarray, p: int = DEFAULT_P) -> bool:
    """True iff column vector *v* lies in the column span of *m*."""
    v = np.mod(np.asarray(v, dtype=np.int64).reshape(-1), p)
    if v.shape[0] != m.shape[0]:
        raise ValueError("vector length must equal matrix row count")
    if not v.any():
        return True
    aug = np.hstack([m, v.reshape(-1, 1)])
    return rank(aug, p) == rank(m, p)


def kernel_basis(m: np.ndarray, p: int = DEFAULT_P) -> np.ndarray:
    """Columns form a deterministic basis of ker(m); count = cols - rank."""
    n_cols = m.shape[1]
    if n_cols == 0:
        return zeros(0, 0)
    if m.shape[0] == 0:
        return eye(n_cols)
    r, pivots = row_echelon(m, p)
    free = [c for c in range(n_cols) if c not in pivots]
    basis = zeros(n_cols, len(free))
    for k, fc in enumerate(free):
        basis[fc, k] = 1
        for row_i, pc in enumerate(pivots):
            basis[pc, k] = (-int(r[row_i, fc])) % p
    return basis


def column_space_basis(m: np.ndarray, p: int = DEFAULT_P) -> np.ndarray:
    """Deterministic basis of the column space (pivot columns of m)."""
    if m.size == 0:
        return zeros(m.shape[0], 0)
    _, pivots = row_echelon(m, p)
    return m[:, pivots].copy()


def solve(a: np.ndarray, b: np.ndarray, p: int = DEFAULT_P) -> np.ndarray:
    """Solve a @ x = b over F_p (b may have several columns).

    Raises ValueError if any column of b is outside the span of a.
    Free variables are set to 0, so the solution is deterministic.
    """
    b = np.mod(np.asarray(b, dtype=np.int64), p)
    single = b.ndim == 1
    if single:
        b = b.reshape(-1, 1)
    if a.shape[0] != b.shape[0]:
        raise ValueError("incompatible shapes in solve")
    aug = np.hstack([a, b])
    r, pivots = row_echelon(aug, p)
    n = a.shape[1]
    if any(c >= n for c in pivots):
        raise ValueError("inconsistent linear system over F_p")
    x = zeros(n, b.shape[1])
    for row_i, pc in enumerate(pivots):
        x[pc] = r[row_i, n:]
    return x[:, 0] if single else x


def coordinates_in_basis(basis: np.ndarray, vectors: np.ndarray,
                         p: int = DEFAULT_P) -> np.ndarray:
    """Express *vectors* (columns) in terms of the columns of *basis*."""
    return solve(basis, vectors, p)

"""Dense linear algebra over a prime field Z_p.

Matrices are plain ``numpy.int64`` arrays holding residues in [0, p). The
prime is kept below 2**50 so the float-quotient product reduction used by the
kernels stays exact.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import ZeroPivot

PRIME_FLOOR = 2**31
PRIME_CEILING = 2**50

# Deterministic Miller-Rabin for every n < 3.3e24, far beyond PRIME_CEILING.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for b in _MR_BASES:
        if n % b == 0:
            return n == b
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class FieldParams:
    p: int
    n: int

    def __post_init__(self):
        if not PRIME_FLOOR <= self.p < PRIME_CEILING or not is_prime(self.p):
            raise ValueError(f"unsupported modulus {self.p}")


def next_prime(n: int) -> int:
    c = max(n, 2)
    while not is_prime(c):
        c += 1
    return c


def max_prime_size() -> int:
    """Largest n for which gen_prime(n) stays below the modulus ceiling."""
    n = int(round(PRIME_CEILING ** 0.25))
    while n ** 4 >= PRIME_CEILING or next_prime(max(n ** 4, PRIME_FLOOR)) >= PRIME_CEILING:
        n -= 1
    return n


def gen_prime(n: int) -> FieldParams:
    """Smallest prime p >= max(n**4, 2**31)."""
    if n < 1:
        raise ValueError("n must be positive")
    p = next_prime(max(n**4, PRIME_FLOOR))
    if p >= PRIME_CEILING:
        raise ValueError(f"n={n} needs a prime above 2**50; use a smaller size bound")
    return FieldParams(p=p, n=n)


def prime_for_size(m: int) -> FieldParams:
    """gen_prime(m), saturating at the largest supported size."""
    return gen_prime(min(max(m, 1), max_prime_size()))


def reduce(A, p: int) -> np.ndarray:
    """Canonical residues of an integer array (Python ints allowed)."""
    arr = np.asarray(A, dtype=object) % p
    return arr.astype(np.int64)


def inv(a: int, p: int) -> int:
    a = int(a) % p
    if a == 0:
        raise ZeroDivisionError("zero has no inverse")
    return pow(a, p - 2, p)


def mat_mul(A: np.ndarray, B: np.ndarray, p: int) -> np.ndarray:
    if A.ndim != 2 or B.ndim != 2 or A.shape[1] != B.shape[0]:
        raise ValueError(f"cannot multiply {A.shape} by {B.shape}")
    return kernels.matmul(A, B, p)


def gauss_rank(A: np.ndarray, p: int) -> int:
    """Rank over Z_p (full pivoting)."""
    if A.size == 0:
        return 0
    return kernels.gauss_rank(A, p)


@dataclass
class LUFactors:
    L: np.ndarray
    U: np.ndarray
    rank_prefix: int


def lu(A: np.ndarray, p: int) -> LUFactors:
    """No-pivot LU of a square matrix; raises ZeroPivot on a vanishing pivot."""
    n = A.shape[0]
    F = np.array(A, dtype=np.int64, copy=True)
    _, code, pos = kernels.eliminate_leading(F, n, p, False)
    if code != kernels.OK:
        raise ZeroPivot(int(pos))
    L = np.tril(F, -1)
    L[np.diag_indices(n)] = 1
    return LUFactors(L=L, U=np.triu(F), rank_prefix=n)


def solve_unit_lower(L: np.ndarray, B: np.ndarray, p: int) -> np.ndarray:
    """X with L X = B for unit lower-triangular L."""
    X = np.array(B, dtype=np.int64, copy=True)
    for i in range(L.shape[0]):
        col = L[i + 1:, i]
        if X.shape[1] and np.any(col):
            X[i + 1:] = kernels.submod(X[i + 1:], kernels.mulmod(col[:, None], X[i][None, :], p), p)
    return X


def solve_upper_right(U: np.ndarray, B: np.ndarray, p: int) -> np.ndarray:
    """Y with Y U = B for upper-triangular U with nonzero diagonal."""
    Y = np.array(B, dtype=np.int64, copy=True)
    k = U.shape[0]
    for j in range(k):
        d = int(U[j, j])
        if d == 0:
            raise ZeroPivot(j)
        Y[:, j] = kernels.mulmod(Y[:, j], inv(d, p), p)
        row = U[j, j + 1:]
        if Y.shape[0] and np.any(row):
            Y[:, j + 1:] = kernels.submod(Y[:, j + 1:], kernels.mulmod(Y[:, j][:, None], row[None, :], p), p)
    return Y


@dataclass
class PartialElimination:
    """Block factors of eliminating the leading k rows.

    A = [[L, 0], [A21 U^-1, I]] @ [[U, L^-1 A12], [0, S]] where S is the
    Schur complement A22 - A21 A11^-1 A12.
    """

    L: np.ndarray
    U: np.ndarray
    A21_Uinv: np.ndarray
    Linv_A12: np.ndarray
    schur: np.ndarray

    def recompose(self, p: int) -> np.ndarray:
        k = self.L.shape[0]
        n = k + self.schur.shape[0]
        left = np.zeros((n, n), dtype=np.int64)
        right = np.zeros((n, n), dtype=np.int64)
        left[:k, :k] = self.L
        left[k:, :k] = self.A21_Uinv
        left[k:, k:] = np.eye(n - k, dtype=np.int64)
        right[:k, :k] = self.U
        right[:k, k:] = self.Linv_A12
        right[k:, k:] = self.schur
        return mat_mul(left, right, p)


def partial_eliminate(A: np.ndarray, k: int, p: int) -> PartialElimination:
    """Eliminate the leading k rows of square A via the block formula.

    Factor A11 = L U, solve for L^-1 A12 and A21 U^-1 by triangular
    substitution, and form the Schur complement with one product.
    """
    n = A.shape[0]
    if not 0 <= k <= n:
        raise ValueError("k out of range")
    A = np.asarray(A, dtype=np.int64)
    f = lu(A[:k, :k], p)
    Linv_A12 = solve_unit_lower(f.L, A[:k, k:], p)
    A21_Uinv = solve_upper_right(f.U, A[k:, :k], p)
    schur = kernels.submod(A[k:, k:].copy(), mat_mul(A21_Uinv, Linv_A12, p), p)
    return PartialElimination(f.L, f.U, A21_Uinv, Linv_A12, schur)


def inverse(A: np.ndarray, p: int) -> np.ndarray:
    """Dense inverse by Gauss-Jordan with row pivoting; raises Singular."""
    from .errors import Singular

    n = A.shape[0]
    M = np.zeros((n, 2 * n), dtype=np.int64)
    M[:, :n] = A
    M[:, n:] = np.eye(n, dtype=np.int64)
    for c in range(n):
        nz = np.flatnonzero(M[c:, c])
        if nz.size == 0:
            raise Singular(f"matrix is singular (column {c})")
        r = c + nz[0]
        if r != c:
            M[[c, r]] = M[[r, c]]
        M[c] = kernels.mulmod(M[c], inv(M[c, c], p), p)
        rows = np.flatnonzero(M[:, c])
        rows = rows[rows != c]
        if rows.size:
            M[rows] = kernels.submod(M[rows], kernels.mulmod(M[rows, c][:, None], M[c][None, :], p), p)
    return M[:, n:].copy()

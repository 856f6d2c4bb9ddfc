"""Pure-numpy counterparts of the loop kernels (no JIT required)."""

import numpy as np

from ._loops import NONNULL_ZERO_PIVOT, OK, ZERO_PIVOT


def mulmod(a, b, p):
    """Elementwise a*b mod p for int64 arrays with entries in [0, p), p < 2**50."""
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    q = (a.astype(np.float64) * b.astype(np.float64) / float(p)).astype(np.int64)
    with np.errstate(over="ignore"):
        r = np.atleast_1d(a * b - q * p)
    r[r < 0] += p
    r[r >= p] -= p
    return r.reshape(np.broadcast(a, b).shape)


def submod(a, b, p):
    r = a - b
    r[r < 0] += p
    return r


def addmod(a, b, p):
    r = a + b
    r[r >= p] -= p
    return r


def inv(a, p):
    return pow(int(a), p - 2, p)


def eliminate_leading(F, k, p, skip_zero):
    n = F.shape[0]
    status = np.zeros(k, dtype=np.int8)
    for j in range(k):
        piv = int(F[j, j])
        if piv == 0:
            if not skip_zero:
                return status, ZERO_PIVOT, j
            if np.any(F[j, j + 1:]) or np.any(F[j + 1:, j]):
                return status, NONNULL_ZERO_PIVOT, j
            continue
        rows = j + 1 + np.flatnonzero(F[j + 1:, j])
        if rows.size:
            lm = mulmod(F[rows, j], np.full(rows.size, inv(piv, p), dtype=np.int64), p)
            F[rows, j] = lm
            cols = j + 1 + np.flatnonzero(F[j, j + 1:])
            if cols.size:
                block = F[np.ix_(rows, cols)]
                upd = mulmod(lm[:, None], F[j, cols][None, :], p)
                F[np.ix_(rows, cols)] = submod(block, upd, p)
        status[j] = 1
    return status, OK, -1


def gauss_rank(A, p):
    M = np.array(A, dtype=np.int64, copy=True)
    m, n = M.shape
    rank = 0
    while rank < min(m, n):
        nz = np.argwhere(M[rank:, rank:] != 0)
        if nz.size == 0:
            break
        pr, pc = nz[0] + rank
        M[[rank, pr], :] = M[[pr, rank], :]
        M[:, [rank, pc]] = M[:, [pc, rank]]
        rows = rank + 1 + np.flatnonzero(M[rank + 1:, rank])
        if rows.size:
            lm = mulmod(M[rows, rank], np.full(rows.size, inv(M[rank, rank], p), dtype=np.int64), p)
            upd = mulmod(lm[:, None], M[rank, rank + 1:][None, :], p)
            M[rows, rank + 1:] = submod(M[rows, rank + 1:], upd, p)
            M[rows, rank] = 0
        rank += 1
    return rank


def matmul(A, B, p):
    m, k = A.shape
    C = np.zeros((m, B.shape[1]), dtype=np.int64)
    for t in range(k):
        col = A[:, t]
        rows = np.flatnonzero(col)
        if rows.size == 0:
            continue
        C[rows] = addmod(C[rows], mulmod(col[rows][:, None], B[t][None, :], p), p)
    return C


def schur2(C, i, j, p):
    a, b, c, d = (int(C[i, i]), int(C[i, j]), int(C[j, i]), int(C[j, j]))
    det = (a * d - b * c) % p
    if det == 0:
        return False
    dinv = pow(det, p - 2, p)
    inv2 = np.array([[d * dinv % p, (-b * dinv) % p],
                     [(-c * dinv) % p, a * dinv % p]], dtype=np.int64)
    left = C[:, [i, j]]
    right = C[[i, j], :]
    # left @ inv2 (2 columns), then rank-2 outer update
    s = addmod(mulmod(left[:, 0], inv2[0, 0], p), mulmod(left[:, 1], inv2[1, 0], p), p)
    t = addmod(mulmod(left[:, 0], inv2[0, 1], p), mulmod(left[:, 1], inv2[1, 1], p), p)
    delta = addmod(mulmod(s[:, None], right[0][None, :], p),
                   mulmod(t[:, None], right[1][None, :], p), p)
    C[...] = submod(C, delta, p)
    C[:, [i, j]] = 0
    C[[i, j], :] = 0
    return True

"""Scalar-loop kernels over Z_p, written so numba can compile them unchanged.

All arrays are int64 with entries in [0, p) and p < 2**50. Products are
reduced with a floating-point quotient estimate: the estimate is off by at
most one, and the wrapped int64 remainder is corrected afterwards.
"""

import numpy as np

# Return codes for eliminate_leading.
OK = 0
ZERO_PIVOT = 1
NONNULL_ZERO_PIVOT = 2


def mulmod(a, b, p):
    q = np.int64(float(a) * float(b) / float(p))
    r = a * b - q * p
    if r < 0:
        r += p
    elif r >= p:
        r -= p
    return r


def powmod(a, e, p):
    result = np.int64(1)
    base = a % p
    while e > 0:
        if e & 1:
            result = mulmod(result, base, p)
        base = mulmod(base, base, p)
        e >>= 1
    return result


def eliminate_leading(F, k, p, skip_zero):
    """Gaussian elimination (no pivoting) on the first k rows of square F.

    Works in place: strictly-lower entries of the first k columns receive the
    multipliers, the first k rows receive U, the trailing block the Schur
    complement. Returns (status, code, position); status[j] is 1 for a used
    pivot and 0 for a skipped zero pivot whose row and column were null.
    """
    n = F.shape[0]
    status = np.zeros(k, dtype=np.int8)
    for j in range(k):
        piv = F[j, j]
        if piv == 0:
            if not skip_zero:
                return status, ZERO_PIVOT, j
            for t in range(j + 1, n):
                if F[j, t] != 0 or F[t, j] != 0:
                    return status, NONNULL_ZERO_PIVOT, j
            continue
        inv = powmod(piv, p - 2, p)
        for r in range(j + 1, n):
            f = F[r, j]
            if f == 0:
                continue
            lm = mulmod(f, inv, p)
            F[r, j] = lm
            for c in range(j + 1, n):
                u = F[j, c]
                if u != 0:
                    v = F[r, c] - mulmod(lm, u, p)
                    if v < 0:
                        v += p
                    F[r, c] = v
        status[j] = 1
    return status, OK, -1


def gauss_rank(A, p):
    """Rank over Z_p with full pivoting; A is left untouched."""
    M = A.copy()
    m, n = M.shape
    rank = 0
    for _ in range(min(m, n)):
        pr = -1
        pc = -1
        for i in range(rank, m):
            for j in range(rank, n):
                if M[i, j] != 0:
                    pr = i
                    pc = j
                    break
            if pr >= 0:
                break
        if pr < 0:
            break
        if pr != rank:
            for j in range(n):
                t = M[rank, j]
                M[rank, j] = M[pr, j]
                M[pr, j] = t
        if pc != rank:
            for i in range(m):
                t = M[i, rank]
                M[i, rank] = M[i, pc]
                M[i, pc] = t
        inv = powmod(M[rank, rank], p - 2, p)
        for i in range(rank + 1, m):
            f = M[i, rank]
            if f == 0:
                continue
            lm = mulmod(f, inv, p)
            M[i, rank] = 0
            for j in range(rank + 1, n):
                u = M[rank, j]
                if u != 0:
                    v = M[i, j] - mulmod(lm, u, p)
                    if v < 0:
                        v += p
                    M[i, j] = v
        rank += 1
    return rank


def matmul(A, B, p):
    m, k = A.shape
    n = B.shape[1]
    C = np.zeros((m, n), dtype=np.int64)
    block = 64
    for i0 in range(0, m, block):
        i1 = min(i0 + block, m)
        for t0 in range(0, k, block):
            t1 = min(t0 + block, k)
            for i in range(i0, i1):
                for t in range(t0, t1):
                    a = A[i, t]
                    if a == 0:
                        continue
                    for j in range(n):
                        b = B[t, j]
                        if b != 0:
                            v = C[i, j] + mulmod(a, b, p)
                            if v >= p:
                                v -= p
                            C[i, j] = v
    return C


def schur2(C, i, j, p):
    """Eliminate indices i and j from C via C - C[:,S] C[S,S]^-1 C[S,:].

    Rows and columns i, j are zeroed afterwards. Returns False (and leaves C
    unchanged) when the 2x2 block C[S,S] is singular.
    """
    a = C[i, i]
    b = C[i, j]
    c = C[j, i]
    d = C[j, j]
    det = mulmod(a, d, p) - mulmod(b, c, p)
    if det < 0:
        det += p
    if det == 0:
        return False
    dinv = powmod(det, p - 2, p)
    # inverse of [[a, b], [c, d]] is dinv * [[d, -b], [-c, a]]
    ia = mulmod(d, dinv, p)
    ib = (p - mulmod(b, dinv, p)) % p
    ic = (p - mulmod(c, dinv, p)) % p
    id_ = mulmod(a, dinv, p)
    n = C.shape[0]
    ri = C[i, :].copy()
    rj = C[j, :].copy()
    for r in range(n):
        x = C[r, i]
        y = C[r, j]
        if x == 0 and y == 0:
            continue
        # (x, y) @ inverse
        s = mulmod(x, ia, p) + mulmod(y, ic, p)
        if s >= p:
            s -= p
        t = mulmod(x, ib, p) + mulmod(y, id_, p)
        if t >= p:
            t -= p
        for col in range(n):
            u = ri[col]
            w = rj[col]
            if u == 0 and w == 0:
                continue
            delta = mulmod(s, u, p) + mulmod(t, w, p)
            if delta >= p:
                delta -= p
            v = C[r, col] - delta
            if v < 0:
                v += p
            C[r, col] = v
    for r in range(n):
        C[r, i] = 0
        C[r, j] = 0
        C[i, r] = 0
        C[j, r] = 0
    return True

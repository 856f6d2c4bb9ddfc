"""Time the numba kernels against the pure-numpy fallback.

    python3 benchmarks/bench_kernels.py [--sizes 64 128 256] [--repeat 5]

Both backends are imported side by side (the GEOMATCH_DISABLE_NUMBA flag only
picks the default one), so a single run compares them and checks that they
return identical results.
"""

import argparse
import time

import numpy as np

from geomatch.field import gen_prime
from geomatch.kernels import loop_kernels, vector_kernels


def _best(fn, make, repeat):
    best, out = float("inf"), None
    for _ in range(repeat):
        arg = make()
        t = time.perf_counter()
        out = fn(arg)
        best = min(best, time.perf_counter() - t)
    return best, out


def cases(n, p, rng):
    A = rng.integers(0, p, size=(n, n), dtype=np.int64)
    B = rng.integers(0, p, size=(n, n), dtype=np.int64)
    skew = np.triu(A, 1)
    skew = (skew - skew.T) % p
    return {
        "eliminate_leading": (lambda: A.copy(), lambda K, F: (K.eliminate_leading(F, n // 2, p, False), F)[1]),
        "gauss_rank": (lambda: A.copy(), lambda K, F: K.gauss_rank(F, p)),
        "matmul": (lambda: A, lambda K, F: K.matmul(F, B, p)),
        "schur2": (lambda: skew.copy(), lambda K, F: (K.schur2(F, 0, 1, p), F)[1]),
    }


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[64, 128, 256])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    if loop_kernels is None:
        raise SystemExit("numba is not importable; nothing to compare")
    p = gen_prime(max(args.sizes)).p
    rng = np.random.default_rng(0)
    print(f"{'kernel':<18}{'n':>6}{'numba ms':>12}{'numpy ms':>12}{'speedup':>10}  same")
    for n in args.sizes:
        for name, (make, call) in cases(n, p, rng).items():
            call(loop_kernels, make())  # compile outside the timing
            tj, rj = _best(lambda F: call(loop_kernels, F), make, args.repeat)
            tv, rv = _best(lambda F: call(vector_kernels, F), make, args.repeat)
            same = np.array_equal(np.asarray(rj), np.asarray(rv))
            print(f"{name:<18}{n:>6}{1e3 * tj:>12.2f}{1e3 * tv:>12.2f}{tv / tj:>10.1f}  {same}")


if __name__ == "__main__":
    main()

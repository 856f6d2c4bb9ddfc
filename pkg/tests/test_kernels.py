"""The compiled loop kernels and the numpy kernels must agree bit for bit."""

import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from geomatch import kernels
from geomatch.field import gen_prime

P = gen_prime(200).p

needs_numba = pytest.mark.skipif(kernels.loop_kernels is None, reason="numba not installed")


def rand_matrix(rng, n, m, zero_frac=0.0):
    A = rng.integers(0, P, size=(n, m), dtype=np.int64)
    if zero_frac:
        A[rng.random((n, m)) < zero_frac] = 0
    return A


@needs_numba
@given(st.integers(0, 2**32 - 1), st.integers(1, 40), st.floats(0, 0.9))
def test_eliminate_leading_agrees(seed, n, zero_frac):
    rng = np.random.default_rng(seed)
    A = rand_matrix(rng, n, n, zero_frac)
    k = int(rng.integers(0, n + 1))
    for skip in (False, True):
        F1, F2 = A.copy(), A.copy()
        r1 = kernels.loop_kernels.eliminate_leading(F1, k, P, skip)
        r2 = kernels.vector_kernels.eliminate_leading(F2, k, P, skip)
        assert np.array_equal(np.asarray(r1[0]), np.asarray(r2[0]))
        assert int(r1[1]) == int(r2[1]) and int(r1[2]) == int(r2[2])
        assert np.array_equal(F1, F2)


@needs_numba
@given(st.integers(0, 2**32 - 1), st.integers(1, 30), st.integers(1, 30), st.floats(0, 0.95))
def test_rank_agrees(seed, n, m, zero_frac):
    A = rand_matrix(np.random.default_rng(seed), n, m, zero_frac)
    assert int(kernels.loop_kernels.gauss_rank(A.copy(), P)) == int(kernels.vector_kernels.gauss_rank(A.copy(), P))


@needs_numba
@given(st.integers(0, 2**32 - 1), st.integers(1, 90), st.integers(1, 90), st.integers(1, 90))
def test_matmul_agrees(seed, n, k, m):
    rng = np.random.default_rng(seed)
    A, B = rand_matrix(rng, n, k), rand_matrix(rng, k, m)
    assert np.array_equal(kernels.loop_kernels.matmul(A, B, P), kernels.vector_kernels.matmul(A, B, P))


@needs_numba
@given(st.integers(0, 2**32 - 1), st.integers(2, 25))
def test_schur2_agrees(seed, n):
    rng = np.random.default_rng(seed)
    C = rand_matrix(rng, n, n, 0.3)
    i, j = rng.choice(n, size=2, replace=False)
    C1, C2 = C.copy(), C.copy()
    assert bool(kernels.loop_kernels.schur2(C1, int(i), int(j), P)) == bool(
        kernels.vector_kernels.schur2(C2, int(i), int(j), P))
    assert np.array_equal(C1, C2)


def test_mulmod_exact_near_modulus():
    big = gen_prime(5000).p
    a = np.array([big - 1, big - 2, 123456789012], dtype=np.int64)
    b = np.array([big - 1, 3, big - 5], dtype=np.int64)
    want = [int(x) * int(y) % big for x, y in zip(a, b)]
    assert kernels.mulmod(a, b, big).tolist() == want


def test_disable_flag_selects_numpy_backend():
    env = dict(os.environ, GEOMATCH_DISABLE_NUMBA="1")
    out = subprocess.run([sys.executable, "-c", "import geomatch.kernels as k; print(k.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "numpy"


def test_max_retries_override(monkeypatch):
    from geomatch._config import max_retries

    monkeypatch.setenv("GEOMATCH_MAX_RETRIES", "7")
    assert max_retries(3) == 7
    monkeypatch.setenv("GEOMATCH_MAX_RETRIES", "0")
    with pytest.raises(ValueError):
        max_retries(3)
    monkeypatch.delenv("GEOMATCH_MAX_RETRIES")
    assert max_retries(3) == 3

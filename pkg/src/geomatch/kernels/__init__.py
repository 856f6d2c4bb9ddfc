"""Hot modular-arithmetic kernels.

The loop versions in ``_loops`` are compiled with numba when it is importable
and ``GEOMATCH_DISABLE_NUMBA`` is unset; otherwise the vectorized numpy
versions in ``_vector`` are used. Both are exposed as ``loop_kernels`` /
``vector_kernels`` so tests and benchmarks can compare them directly.
"""

from __future__ import annotations

from types import SimpleNamespace

import numpy as np

from .._config import numba_disabled
from . import _loops, _vector
from ._loops import NONNULL_ZERO_PIVOT, OK, ZERO_PIVOT

try:  # pragma: no cover - exercised implicitly
    import numba

    HAS_NUMBA = True
except ImportError:  # pragma: no cover
    numba = None
    HAS_NUMBA = False


def _compile_loops():
    jit = numba.njit(cache=True)
    mulmod = jit(_loops.mulmod)
    ns = {"np": np, "mulmod": mulmod}
    # Re-bind the helpers each kernel calls so numba sees jitted callees.
    powmod = jit(_rebind(_loops.powmod, ns))
    ns["powmod"] = powmod
    return SimpleNamespace(
        name="numba",
        eliminate_leading=jit(_rebind(_loops.eliminate_leading, ns)),
        gauss_rank=jit(_rebind(_loops.gauss_rank, ns)),
        matmul=jit(_rebind(_loops.matmul, ns)),
        schur2=jit(_rebind(_loops.schur2, ns)),
    )


def _rebind(fn, ns):
    import types

    glb = dict(fn.__globals__)
    glb.update(ns)
    return types.FunctionType(fn.__code__, glb, fn.__name__, fn.__defaults__, fn.__closure__)


vector_kernels = SimpleNamespace(
    name="numpy",
    eliminate_leading=_vector.eliminate_leading,
    gauss_rank=_vector.gauss_rank,
    matmul=_vector.matmul,
    schur2=_vector.schur2,
)

if HAS_NUMBA:
    loop_kernels = _compile_loops()
else:  # pragma: no cover
    loop_kernels = None

active = vector_kernels if (loop_kernels is None or numba_disabled()) else loop_kernels
BACKEND = active.name

mulmod = _vector.mulmod
addmod = _vector.addmod
submod = _vector.submod


def eliminate_leading(F: np.ndarray, k: int, p: int, skip_zero: bool = False):
    return active.eliminate_leading(F, k, p, skip_zero)


def gauss_rank(A: np.ndarray, p: int) -> int:
    return int(active.gauss_rank(np.ascontiguousarray(A, dtype=np.int64), p))


def matmul(A: np.ndarray, B: np.ndarray, p: int) -> np.ndarray:
    return active.matmul(np.ascontiguousarray(A, dtype=np.int64),
                         np.ascontiguousarray(B, dtype=np.int64), p)


def schur2(C: np.ndarray, i: int, j: int, p: int) -> bool:
    return bool(active.schur2(C, i, j, p))


__all__ = [
    "BACKEND", "HAS_NUMBA", "OK", "ZERO_PIVOT", "NONNULL_ZERO_PIVOT",
    "loop_kernels", "vector_kernels", "mulmod", "addmod", "submod",
    "eliminate_leading", "gauss_rank", "matmul", "schur2",
]

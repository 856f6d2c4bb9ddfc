"""Runtime switches read from the environment.

GEOMATCH_DISABLE_NUMBA=1   use the pure-numpy kernels even when numba is importable
GEOMATCH_MAX_RETRIES=<int> override every retry budget (separator draws, restarts)
"""

from __future__ import annotations

import os


def _flag(name: str) -> bool:
    return os.environ.get(name, "").strip().lower() in {"1", "true", "yes", "on"}


def numba_disabled() -> bool:
    return _flag("GEOMATCH_DISABLE_NUMBA")


def max_retries(default: int) -> int:
    """Retry budget, possibly overridden by GEOMATCH_MAX_RETRIES."""
    raw = os.environ.get("GEOMATCH_MAX_RETRIES")
    if raw is None or raw.strip() == "":
        return default
    value = int(raw)
    if value < 1:
        raise ValueError("GEOMATCH_MAX_RETRIES must be a positive integer")
    return value

"""Selects the compiled (numba) or pure-numpy implementation of the hot kernels.

Set ``HOMEFIELD_DISABLE_NUMBA=1`` to force the numpy path, e.g. when numba is
broken on a platform or to compare both paths (see ``benchmarks/``).
"""

import os

_FLAG = "HOMEFIELD_DISABLE_NUMBA"

try:
    import numba
except ImportError:  # pragma: no cover - exercised only without numba installed
    numba = None

NUMBA_AVAILABLE = numba is not None
USE_NUMBA = NUMBA_AVAILABLE and os.environ.get(_FLAG, "").strip().lower() not in (
    "1",
    "true",
    "yes",
    "on",
)


def njit(fn):
    """``numba.njit(cache=True)`` when numba is importable, identity otherwise."""
    if NUMBA_AVAILABLE:
        return numba.njit(cache=True)(fn)
    return fn


def backend_name() -> str:
    return "numba" if USE_NUMBA else "numpy"

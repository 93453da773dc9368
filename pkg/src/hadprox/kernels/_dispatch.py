"""Kernel dispatch: numba JIT when available, plain numpy otherwise.

Every kernel module defines ordinary numpy functions and wraps them with
``jit_kernel``. With numba installed the wrapper compiles them in nopython
mode (cached on disk); set ``HADPROX_DISABLE_NUMBA=1`` to force the pure
numpy path, e.g. for debugging or benchmarking the fallback.
"""

from __future__ import annotations

import os

try:
    import numba

    HAS_NUMBA = True
except ImportError:  # pragma: no cover - exercised via the env flag instead
    numba = None
    HAS_NUMBA = False


def _disabled_by_env() -> bool:
    return os.environ.get("HADPROX_DISABLE_NUMBA", "").strip().lower() in (
        "1",
        "true",
        "yes",
    )


USE_NUMBA = HAS_NUMBA and not _disabled_by_env()


def jit_kernel(fn):
    if USE_NUMBA:
        return numba.njit(cache=True, fastmath=False)(fn)
    return fn


def active_backend() -> str:
    return "numba" if USE_NUMBA else "numpy"

"""Hot geometry kernels, numba-compiled when available."""

from __future__ import annotations

import numpy as np

from . import hyperboloid, spd
from ._dispatch import HAS_NUMBA, USE_NUMBA, active_backend

__all__ = ["hyperboloid", "spd", "HAS_NUMBA", "USE_NUMBA", "active_backend", "warmup"]


def warmup() -> str:
    """Trigger JIT compilation of every kernel on tiny inputs.

    Returns the active backend name. Useful before timing anything.
    """
    p = np.array([np.sqrt(2.0), 1.0, 0.0])
    q = np.array([np.sqrt(1.25), 0.0, 0.5])
    v = hyperboloid.log(p, q)
    hyperboloid.exp(p, v)
    hyperboloid.dist(p, q)
    hyperboloid.transport(p, q, v)
    hyperboloid.mink_inner(p, q)
    hyperboloid.project_tangent(p, v)
    hyperboloid.point_defect(p)
    hyperboloid.tangent_defect(p, v)

    a = np.array([[2.0, 0.3], [0.3, 1.0]])
    b = np.array([[1.0, -0.2], [-0.2, 1.5]])
    t = np.array([[0.1, 0.05], [0.05, -0.2]])
    spd.exp(a, t)
    spd.log(a, b)
    spd.dist(a, b)
    spd.transport(a, b, t)
    spd.inner(a, t, t)
    spd.min_eig(a)
    return active_backend()

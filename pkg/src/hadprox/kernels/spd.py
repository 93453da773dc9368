"""Symmetric positive definite matrices under the affine-invariant metric.

All matrix functions go through symmetric eigendecompositions. Eigenvalues at
or below EIG_FLOOR raise instead of being clamped; silent projection would
mask caller bugs.
"""

from __future__ import annotations

import numpy as np

from ._dispatch import jit_kernel

EIG_FLOOR = 1e-14


@jit_kernel
def sym(a):
    return 0.5 * (a + a.T)


@jit_kernel
def _eigh(a):
    return np.linalg.eigh(np.ascontiguousarray(a))


@jit_kernel
def min_eig(a):
    w, _ = _eigh(a)
    return w[0]


@jit_kernel
def sqrt_pair(p):
    # returns (p^{1/2}, p^{-1/2})
    w, v = _eigh(p)
    if w[0] <= EIG_FLOOR:
        raise ValueError("matrix eigenvalue at or below the positivity floor")
    sq = np.sqrt(w)
    vt = np.ascontiguousarray(v.T)
    return (v * sq) @ vt, (v * (1.0 / sq)) @ vt


@jit_kernel
def _expm_sym(a):
    w, v = _eigh(a)
    vt = np.ascontiguousarray(v.T)
    return (v * np.exp(w)) @ vt


@jit_kernel
def _logm_spd(a):
    w, v = _eigh(a)
    if w[0] <= EIG_FLOOR:
        raise ValueError("matrix logarithm of a non positive definite argument")
    vt = np.ascontiguousarray(v.T)
    return (v * np.log(w)) @ vt


@jit_kernel
def exp(p, vtan):
    s, si = sqrt_pair(p)
    inner_m = sym(si @ vtan @ si)
    return sym(s @ _expm_sym(inner_m) @ s)


@jit_kernel
def log(p, q):
    s, si = sqrt_pair(p)
    m = sym(si @ q @ si)
    return sym(s @ _logm_spd(m) @ s)


@jit_kernel
def dist(p, q):
    _, si = sqrt_pair(p)
    m = sym(si @ q @ si)
    w, _ = _eigh(m)
    if w[0] <= EIG_FLOOR:
        raise ValueError("matrix logarithm of a non positive definite argument")
    lw = np.log(w)
    return np.sqrt(lw @ lw)


@jit_kernel
def transport(p, q, vtan):
    # E = (q p^{-1})^{1/2} = p^{1/2} (p^{-1/2} q p^{-1/2})^{1/2} p^{-1/2}
    s, si = sqrt_pair(p)
    m = sym(si @ q @ si)
    w, v = _eigh(m)
    if w[0] <= EIG_FLOOR:
        raise ValueError("matrix logarithm of a non positive definite argument")
    vt = np.ascontiguousarray(v.T)
    m_half = (v * np.sqrt(w)) @ vt
    e = s @ m_half @ si
    et = np.ascontiguousarray(e.T)
    return sym(e @ vtan @ et)


@jit_kernel
def inner(p, u, vtan):
    # tr(p^{-1} u p^{-1} v)
    w, v = _eigh(p)
    if w[0] <= EIG_FLOOR:
        raise ValueError("matrix eigenvalue at or below the positivity floor")
    vt = np.ascontiguousarray(v.T)
    pinv = (v * (1.0 / w)) @ vt
    a = pinv @ u
    b = pinv @ vtan
    return (a * b.T).sum()

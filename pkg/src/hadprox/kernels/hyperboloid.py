"""Upper-sheet hyperboloid kernels in Minkowski ambient coordinates.

Points x satisfy <x,x>_M = -1 with x[0] > 0, where
<x,y>_M = -x0*y0 + sum_i xi*yi. Tangents at p satisfy <p,v>_M = 0.

Distances are computed through s = cosh(d) - 1 = 0.5*<p-q, p-q>_M, which
avoids the catastrophic cancellation of arccosh(-<p,q>_M) for nearby points
with large coordinates, and d = log1p(s + sqrt(s*(s+2))).
"""

from __future__ import annotations

import numpy as np

from ._dispatch import jit_kernel

# below this geodesic distance log returns the exact zero tangent
ZERO_DIST = 1e-12


@jit_kernel
def mink_inner(x, y):
    return x[1:] @ y[1:] - x[0] * y[0]


@jit_kernel
def project_tangent(p, v):
    # remove the Minkowski component along p (idempotent on exact tangents)
    return v + mink_inner(p, v) * p


@jit_kernel
def cosh_dist_minus_one(p, q):
    d = p - q
    s = 0.5 * mink_inner(d, d)
    if s < 0.0:
        s = 0.0
    return s


@jit_kernel
def dist(p, q):
    # the difference form is exact for close pairs but cancels for pairs much
    # farther apart than their distance to the origin; the product form has
    # the mirrored behavior, so switch once the pair is clearly far
    s = cosh_dist_minus_one(p, q)
    sp = -mink_inner(p, q) - 1.0
    if sp > 1.0:
        s = sp
    return np.log1p(s + np.sqrt(s * (s + 2.0)))


@jit_kernel
def exp(p, v):
    vv = mink_inner(v, v)
    if vv < 0.0:
        vv = 0.0
    n = np.sqrt(vv)
    if n < 1e-16:
        out = p + v
    else:
        out = np.cosh(n) * p + (np.sinh(n) / n) * v
    # recompute the time coordinate; exact on-sheet up to roundoff drift
    out[0] = np.sqrt(1.0 + out[1:] @ out[1:])
    return out


@jit_kernel
def log(p, q):
    s = cosh_dist_minus_one(p, q)
    d = np.log1p(s + np.sqrt(s * (s + 2.0)))
    if d < ZERO_DIST:
        return np.zeros_like(p)
    # u = q - cosh(d)*p written as (q - p) - s*p to keep small differences small
    u = (q - p) - s * p
    sinh_d = np.sqrt(s * (s + 2.0))
    return project_tangent(p, (d / sinh_d) * u)


@jit_kernel
def transport(p, q, v):
    # parallel transport along the geodesic from p to q;
    # <q,v>_M = <q-p,v>_M for tangents at p, better conditioned
    s = cosh_dist_minus_one(p, q)
    a = mink_inner(q - p, v)
    out = v + (a / (2.0 + s)) * (p + q)
    return project_tangent(q, out)


@jit_kernel
def point_defect(x):
    # |<x,x>_M + 1|, zero on the hyperboloid
    return abs(mink_inner(x, x) + 1.0)


@jit_kernel
def tangent_defect(p, v):
    return abs(mink_inner(p, v))

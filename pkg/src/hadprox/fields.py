"""Multivalued vector fields on Hadamard manifolds, epsilon-enlargements,
subdifferential oracles and feasible-set machinery (projections and normal
cones).

The monotonicity convention: a field X is monotone when for all p, q and
u in X(p), v in X(q)

    <T_{p->q} u - v, log_q p>  >=  0,

where T_{p->q} is parallel transport along the geodesic. The
epsilon-enlargement X^eps(p) collects the u that satisfy the same inequality
with right side -eps against every witness (q, v). Probes here evaluate these
inequalities on sampled or user-supplied witness sets; they are one-sided
numerical certificates, not proofs.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np
from scipy.special import ndtri
from scipy.stats import qmc

from .manifold import (
    GeometryError,
    ManifoldOracle,
    ManifoldPoint,
    TangentVector,
    _frozen,
)

__all__ = [
    "AssumptionError",
    "FeasibilityError",
    "FieldElement",
    "FieldOracle",
    "ConvexFunctionOracle",
    "FeasibleSet",
    "MonotonicityReport",
    "whole_manifold",
    "geodesic_ball",
    "box_product",
    "intersection",
    "normal_element",
    "monotonicity_probe",
    "enlargement_gap",
    "enlargement_check",
    "empirical_epsilon",
    "eps_subgradient_check",
    "make_subdifferential_field",
    "negated_field",
    "bounded_on_ball_probe",
    "witness_grid",
    "sample_pairs",
    "check_gradient",
]

PROVENANCES = ("exact", "eps-subgradient", "inner-solver-residual")

# slack allowed when certifying the defining inequalities numerically
CHECK_TOL = 1e-9


class FeasibilityError(ValueError):
    """A point violates the feasible set it was claimed to satisfy."""


class AssumptionError(ValueError):
    """A sampled structural assumption (convexity, skewness, gradients) failed."""


@dataclass(frozen=True)
class FieldElement:
    """One evaluated element of a field, tagged with its accuracy class.

    ``epsilon`` is the enlargement budget the element is certified for;
    provenance "exact" forces epsilon == 0.
    """

    vector: TangentVector
    epsilon: float = 0.0
    provenance: str = "exact"

    def __post_init__(self):
        if self.provenance not in PROVENANCES:
            raise ValueError(f"unknown provenance {self.provenance!r}")
        if not np.isfinite(self.epsilon) or self.epsilon < 0.0:
            raise ValueError("epsilon must be finite and nonnegative")
        if self.provenance == "exact" and self.epsilon != 0.0:
            raise ValueError("exact elements must carry epsilon == 0")


@dataclass(frozen=True)
class FieldOracle:
    """Point-to-element evaluator for a (possibly multivalued) vector field."""

    domain: ManifoldOracle
    evaluate: Callable[[ManifoldPoint], FieldElement]
    strong_modulus: Optional[float] = None
    label: str = ""

    def at(self, p: ManifoldPoint) -> FieldElement:
        el = self.evaluate(p)
        if not isinstance(el, FieldElement):
            raise TypeError(f"field {self.label!r} returned {type(el).__name__}")
        self.domain._based(p, el.vector, f"field {self.label!r}")
        return el

    __call__ = at


@dataclass(frozen=True)
class ConvexFunctionOracle:
    """Value plus one subgradient selection for a geodesically convex function."""

    manifold: ManifoldOracle
    value: Callable[[ManifoldPoint], float]
    subgradient: Callable[[ManifoldPoint], TangentVector]
    label: str = ""


# -- feasible sets -------------------------------------------------------------


@dataclass(frozen=True)
class FeasibleSet:
    """Closed geodesically convex feasible region with projection and normal cone.

    kind is one of "whole-manifold", "geodesic-ball", "box-product",
    "intersection"; the structured fields used by each kind are set by the
    constructors below and ignored otherwise.
    """

    manifold: ManifoldOracle
    kind: str
    center: Optional[ManifoldPoint] = None
    radius: float = 0.0
    lower: Optional[np.ndarray] = None
    upper: Optional[np.ndarray] = None
    members: tuple = ()

    def membership(self, p: ManifoldPoint, tol: float = 1e-9) -> bool:
        self.manifold._own(p, "membership")
        if self.kind == "whole-manifold":
            return True
        if self.kind == "geodesic-ball":
            return self.manifold.dist(self.center, p) <= self.radius + tol
        if self.kind == "box-product":
            return bool(
                np.all(p.coords >= self.lower - tol) and np.all(p.coords <= self.upper + tol)
            )
        return all(m.membership(p, tol) for m in self.members)

    def project(self, p: ManifoldPoint) -> ManifoldPoint:
        self.manifold._own(p, "project")
        if self.kind == "whole-manifold":
            return p
        if self.kind == "geodesic-ball":
            d = self.manifold.dist(self.center, p)
            if d <= self.radius:
                return p
            return self.manifold.exp(
                self.center, (self.radius / d) * self.manifold.log(self.center, p)
            )
        if self.kind == "box-product":
            clipped = np.clip(p.coords, self.lower, self.upper)
            if np.array_equal(clipped, p.coords):
                return p
            return self.manifold.point(clipped)
        # intersection: alternating projections until all members admit the point
        q = p
        for _ in range(100):
            if all(m.membership(q) for m in self.members):
                return q
            for m in self.members:
                q = m.project(q)
        if not all(m.membership(q) for m in self.members):
            raise FeasibilityError("alternating projections failed to reach the intersection")
        return q


def whole_manifold(oracle: ManifoldOracle) -> FeasibleSet:
    return FeasibleSet(oracle, "whole-manifold")


def geodesic_ball(oracle: ManifoldOracle, center: ManifoldPoint, radius: float) -> FeasibleSet:
    oracle._own(center, "geodesic_ball center")
    if not np.isfinite(radius) or radius <= 0.0:
        raise ValueError("ball radius must be positive")
    return FeasibleSet(oracle, "geodesic-ball", center=center, radius=float(radius))


def box_product(oracle: ManifoldOracle, lower, upper) -> FeasibleSet:
    """Coordinate bounds on the flat (Euclidean) slices of ``oracle``.

    Bounds are full ambient-length arrays; entries outside the oracle's flat
    slices must be infinite because a box has no meaning there.
    """
    lo = np.asarray(lower, dtype=float)
    hi = np.asarray(upper, dtype=float)
    if lo.shape != (oracle.ambient_dim,) or hi.shape != (oracle.ambient_dim,):
        raise ValueError("bounds must match the ambient dimension")
    if np.any(lo > hi):
        raise ValueError("lower bound exceeds upper bound")
    flat = np.zeros(oracle.ambient_dim, dtype=bool)
    for a, b in oracle.flat_slices():
        flat[a:b] = True
    if np.any(np.isfinite(lo[~flat])) or np.any(np.isfinite(hi[~flat])):
        raise ValueError("finite bounds are only allowed on flat coordinate slices")
    return FeasibleSet(oracle, "box-product", lower=_frozen(lo), upper=_frozen(hi))


def intersection(members: Sequence[FeasibleSet]) -> FeasibleSet:
    members = tuple(members)
    if not members:
        raise ValueError("intersection needs at least one member")
    m0 = members[0].manifold
    for m in members[1:]:
        if m.manifold.manifold_id != m0.manifold_id:
            raise ValueError("intersection members live on different manifolds")
    return FeasibleSet(m0, "intersection", members=members)


def normal_element(S: FeasibleSet, p: ManifoldPoint, w: TangentVector) -> TangentVector:
    """Projection of ``w`` onto the normal cone of ``S`` at ``p``.

    Returns the cone element closest to w, so that the solver can absorb as
    much of a desired correction as the geometry allows. Raises
    FeasibilityError when p is not in S.
    """
    M = S.manifold
    wc = M._based(p, w, "normal_element")
    if S.kind == "whole-manifold":
        return M.zero_tangent(p)
    if S.kind == "geodesic-ball":
        d = M.dist(S.center, p)
        btol = 1e-9 * (1.0 + S.radius)
        if d > S.radius + btol:
            raise FeasibilityError("normal_element called at an infeasible point")
        if d < S.radius - btol:
            return M.zero_tangent(p)
        outward = (-1.0 / d) * M.log(p, S.center)
        r = M.inner(p, w, outward)
        return max(r, 0.0) * outward
    if S.kind == "box-product":
        atol = 1e-12 * (1.0 + np.abs(p.coords))
        if np.any(p.coords < S.lower - atol) or np.any(p.coords > S.upper + atol):
            raise FeasibilityError("normal_element called at an infeasible point")
        out = np.zeros_like(wc)
        at_lower = p.coords <= S.lower + atol
        at_upper = p.coords >= S.upper - atol
        out[at_lower] = np.minimum(wc[at_lower], 0.0)
        out[at_upper] = np.maximum(wc[at_upper], 0.0)
        pinned = at_lower & at_upper
        out[pinned] = wc[pinned]
        return TangentVector(p, _frozen(out))
    total = M.zero_tangent(p)
    for m in S.members:
        total = total + normal_element(m, p, w)
    return total


# -- probes and checks ---------------------------------------------------------


@dataclass(frozen=True)
class MonotonicityReport:
    min_gap: float
    violations: int
    pairs: int
    strong_min_gap: Optional[float] = None


def monotonicity_probe(X: FieldOracle, pairs) -> MonotonicityReport:
    """Evaluate the monotonicity gap on sampled point pairs.

    For each pair (p, q) the gap is <T_{p->q} X(p) - X(q), log_q p>; when the
    field declares a strong modulus rho the strong gap subtracts rho*d(p,q)^2
    and the violation count is taken against it.
    """
    M = X.domain
    rho = X.strong_modulus
    min_gap = np.inf
    strong_min = np.inf
    violations = 0
    count = 0
    for p, q in pairs:
        u = X.at(p).vector
        v = X.at(q).vector
        g = M.inner(q, M.transport(p, q, u) - v, M.log(q, p))
        min_gap = min(min_gap, g)
        if rho is not None:
            d = M.dist(p, q)
            gs = g - rho * d * d
            strong_min = min(strong_min, gs)
            if gs < -1e-8:
                violations += 1
        elif g < -1e-8:
            violations += 1
        count += 1
    return MonotonicityReport(
        min_gap=float(min_gap),
        violations=violations,
        pairs=count,
        strong_min_gap=None if rho is None else float(strong_min),
    )


def enlargement_gap(
    X: FieldOracle, p: ManifoldPoint, u: TangentVector, witnesses
) -> float:
    """Worst transported-gap of u against the field over the witness set.

    u lies in the eps-enlargement of X at p (as certified by these witnesses)
    exactly when the returned value is >= -eps.
    """
    M = X.domain
    worst = np.inf
    for q in witnesses:
        v = X.at(q).vector
        g = M.inner(q, M.transport(p, q, u) - v, M.log(q, p))
        worst = min(worst, g)
    return float(worst)


def enlargement_check(
    X: FieldOracle, p: ManifoldPoint, u: TangentVector, epsilon: float, witnesses
) -> bool:
    if epsilon < 0.0:
        raise ValueError("epsilon must be nonnegative")
    return enlargement_gap(X, p, u, witnesses) >= -epsilon - CHECK_TOL


def empirical_epsilon(
    f: ConvexFunctionOracle, p: ManifoldPoint, u: TangentVector, witnesses
) -> float:
    """Smallest eps for which u passes the eps-subgradient test on the witnesses."""
    M = f.manifold
    fp = f.value(p)
    worst = 0.0
    for q in witnesses:
        gap = fp + M.inner(p, u, M.log(p, q)) - f.value(q)
        worst = max(worst, gap)
    return float(worst)


def eps_subgradient_check(
    f: ConvexFunctionOracle,
    p: ManifoldPoint,
    u: TangentVector,
    epsilon: float,
    witnesses,
) -> bool:
    """Does f(q) >= f(p) + <u, log_p q> - epsilon hold on every witness q?"""
    if epsilon < 0.0:
        raise ValueError("epsilon must be nonnegative")
    return empirical_epsilon(f, p, u, witnesses) <= epsilon + CHECK_TOL


def make_subdifferential_field(
    f: ConvexFunctionOracle, strong_modulus: Optional[float] = None
) -> FieldOracle:
    def evaluate(p: ManifoldPoint) -> FieldElement:
        return FieldElement(f.subgradient(p), 0.0, "exact")

    return FieldOracle(
        domain=f.manifold,
        evaluate=evaluate,
        strong_modulus=strong_modulus,
        label=f"subdifferential({f.label})",
    )


def negated_field(X: FieldOracle, label: str = "") -> FieldOracle:
    def evaluate(p: ManifoldPoint) -> FieldElement:
        el = X.at(p)
        return FieldElement(-el.vector, el.epsilon, el.provenance)

    return FieldOracle(
        domain=X.domain,
        evaluate=evaluate,
        strong_modulus=None,
        label=label or f"negated({X.label})",
    )


def bounded_on_ball_probe(
    X: FieldOracle,
    center: ManifoldPoint,
    radius: float = 4.0,
    count: int = 256,
    seed: int = 0,
) -> float:
    """Largest element norm of X over a quasi-random sample of the ball."""
    M = X.domain
    worst = 0.0
    for p in witness_grid(M, center, radius=radius, count=count, seed=seed):
        worst = max(worst, M.norm(X.at(p).vector))
    return float(worst)


# -- sampling ------------------------------------------------------------------


def witness_grid(
    oracle: ManifoldOracle,
    center: ManifoldPoint,
    radius: float = 4.0,
    count: int = 256,
    seed: int = 0,
):
    """Deterministic quasi-random witness points in a geodesic ball.

    A scrambled Sobol sequence supplies gaussian directions (via the normal
    quantile) and radii r*u^(1/dim); points are exp(center, .) images. Use
    power-of-two counts to keep the sequence balanced.
    """
    d = oracle.dimension
    eng = qmc.Sobol(d + 1, scramble=True, seed=seed)
    u = eng.random(count)
    z = ndtri(np.clip(u[:, :d], 1e-12, 1.0 - 1e-12))
    radii = radius * u[:, d] ** (1.0 / d)
    pts = []
    for i in range(count):
        t = oracle.tangent_from_intrinsic(center, z[i])
        n = oracle.norm(t)
        if n < 1e-14:
            pts.append(center)
            continue
        pts.append(oracle.exp(center, (radii[i] / n) * t))
    return pts


def sample_pairs(
    oracle: ManifoldOracle,
    center: ManifoldPoint,
    radius: float = 2.0,
    count: int = 128,
    seed: int = 0,
):
    """Independent pseudo-random point pairs in a geodesic ball (for probes)."""
    rng = np.random.default_rng(seed)
    d = oracle.dimension
    out = []
    for _ in range(count):
        pair = []
        for _ in range(2):
            z = rng.standard_normal(d)
            t = oracle.tangent_from_intrinsic(center, z)
            n = oracle.norm(t)
            r = radius * rng.random() ** (1.0 / d)
            if n < 1e-14:
                pair.append(center)
            else:
                pair.append(oracle.exp(center, (r / n) * t))
        out.append(tuple(pair))
    return out


def check_gradient(
    f: ConvexFunctionOracle,
    p: ManifoldPoint,
    seed: int = 0,
    directions: int = 5,
    rtol: float = 1e-5,
    h: float = 1e-6,
) -> None:
    """Central-difference check of f's subgradient along random directions.

    Raises AssumptionError when any directional derivative disagrees with
    <subgradient, direction> beyond rtol (relative to scale 1 + |slope|).
    """
    M = f.manifold
    g = f.subgradient(p)
    rng = np.random.default_rng(seed)
    for _ in range(directions):
        t = M.random_tangent(p, rng)
        n = M.norm(t)
        if n < 1e-14:
            continue
        t = (1.0 / n) * t
        slope = M.inner(p, g, t)
        fd = (f.value(M.exp(p, h * t)) - f.value(M.exp(p, (-h) * t))) / (2.0 * h)
        if abs(slope - fd) > rtol * (1.0 + abs(slope)):
            raise AssumptionError(
                f"gradient of {f.label!r} fails the finite-difference check: "
                f"directional {slope:.8g} vs central difference {fd:.8g}"
            )

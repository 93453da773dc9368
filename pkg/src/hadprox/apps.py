"""Application drivers: geodesically convex optimization, equilibrium
problems and nonlinear programming via KKT systems, each reduced to a
variational inequality and handed to the proximal solver.

The reductions are the substance here:

* optimization: X = subdifferential of the objective; solutions of the VIP
  over the feasible set are exactly the constrained minimizers.
* equilibrium: X(p) picks a subgradient of the partial function F(p, .) at
  its diagonal point p; structural assumptions on F (vanishing diagonal,
  skew bound, convexity in the second slot) are sampled before solving and
  violations reject the reduction.
* NLP: the primal manifold is extended by flat multiplier blocks, the field
  stacks (grad_x Lagrangian, -g(x), h(x)) and the feasible set keeps
  inequality multipliers nonnegative through a box, so multiplier
  nonnegativity is exact projection arithmetic rather than a penalty.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .fields import (
    AssumptionError,
    ConvexFunctionOracle,
    FeasibleSet,
    FieldElement,
    FieldOracle,
    box_product,
    check_gradient,
    geodesic_ball,
    make_subdifferential_field,
    monotonicity_probe,
    negated_field,
    sample_pairs,
    whole_manifold,
    witness_grid,
)
from .manifold import (
    Euclidean,
    Hyperboloid,
    ManifoldOracle,
    ManifoldPoint,
    SymmetricPositiveDefinite,
    TangentVector,
    product_manifold,
)
from .solver import (
    RunRecord,
    Schedules,
    VipProblem,
    ppm_relative,
    scaled_schedules,
)

__all__ = [
    "OptimizationProblem",
    "EquilibriumProblem",
    "NlpProblem",
    "NlpEmbedding",
    "LibraryEntry",
    "opt_to_vip",
    "solve_optimization",
    "check_equilibrium_assumptions",
    "equilibrium_to_vip",
    "solve_equilibrium",
    "nlp_embedding",
    "nlp_to_vip",
    "solve_nlp",
    "kkt_residuals",
    "problem_library",
    "library_entry",
    "library_labels",
]


# -- problem types ---------------------------------------------------------------


@dataclass(frozen=True)
class OptimizationProblem:
    """Minimize a geodesically convex function over a feasible set."""

    objective: ConvexFunctionOracle
    feasible: FeasibleSet
    known_solution: Optional[ManifoldPoint] = None
    strong_modulus: Optional[float] = None

    def __post_init__(self):
        if self.objective.manifold.manifold_id != self.feasible.manifold.manifold_id:
            raise ValueError("objective and feasible set live on different manifolds")


@dataclass(frozen=True)
class EquilibriumProblem:
    """Find x in C with F(x, y) >= 0 for all y in C.

    ``partial_subgradient(x)`` must select a subgradient of y -> F(x, y) at
    y = x. The bifunction itself is kept so the structural assumptions can be
    sampled and the accepted iterates re-certified against it.
    """

    bifunction: object  # Callable[[ManifoldPoint, ManifoldPoint], float]
    partial_subgradient: object  # Callable[[ManifoldPoint], TangentVector]
    feasible: FeasibleSet
    known_solution: Optional[ManifoldPoint] = None
    label: str = ""


@dataclass(frozen=True)
class NlpProblem:
    """Minimize f subject to g_i <= 0 and h_j = 0, all geodesically convex
    and continuously differentiable; equalities should be affine-like so the
    KKT field stays monotone."""

    manifold: ManifoldOracle
    objective: ConvexFunctionOracle
    inequalities: tuple = ()
    equalities: tuple = ()
    known_kkt: Optional[tuple] = None  # (point, mu array, lam array)
    label: str = ""

    def __post_init__(self):
        for c in (self.objective, *self.inequalities, *self.equalities):
            if c.manifold.manifold_id != self.manifold.manifold_id:
                raise ValueError("constraint manifolds disagree with the problem manifold")


# -- optimization -----------------------------------------------------------------


def opt_to_vip(prob: OptimizationProblem) -> VipProblem:
    """The first-order reduction: X = subdifferential of the objective."""
    return VipProblem(
        field=make_subdifferential_field(prob.objective, prob.strong_modulus),
        feasible=prob.feasible,
        known_solution=prob.known_solution,
    )


def solve_optimization(
    prob: OptimizationProblem,
    sched: Schedules,
    p0: ManifoldPoint,
    max_iters: int = 500,
    stop_tol: Optional[float] = None,
    prox_coefficient: float = 1.0,
) -> RunRecord:
    return ppm_relative(
        opt_to_vip(prob),
        scaled_schedules(sched, prox_coefficient),
        p0,
        max_iters=max_iters,
        stop_tol=stop_tol,
    )


# -- equilibrium --------------------------------------------------------------------


def _feasible_samples(S: FeasibleSet, count: int, seed: int):
    anchor = S.project(S.manifold.origin())
    pts = witness_grid(S.manifold, anchor, radius=2.0, count=count, seed=seed)
    return [S.project(p) for p in pts]


def check_equilibrium_assumptions(
    prob: EquilibriumProblem,
    count: int = 16,
    seed: int = 0,
    diag_tol: float = 1e-10,
    skew_tol: float = 1e-9,
    convexity_tol: float = 1e-9,
) -> dict:
    """Sample the structural assumptions on the bifunction.

    Checks F(x,x) = 0, the skew bound F(x,y) + F(y,x) <= tol, and geodesic
    convexity of F(x, .) along chords between feasible samples. Returns the
    worst defects; violations are left to the caller to act on.
    """
    F = prob.bifunction
    M = prob.feasible.manifold
    xs = _feasible_samples(prob.feasible, count, seed)
    worst_diag = 0.0
    worst_skew = -np.inf
    worst_convex = -np.inf
    for x in xs:
        worst_diag = max(worst_diag, abs(F(x, x)))
    for i, x in enumerate(xs):
        y = xs[(i + 1) % len(xs)]
        worst_skew = max(worst_skew, F(x, y) + F(y, x))
        z0, z1 = xs[(i + 2) % len(xs)], xs[(i + 3) % len(xs)]
        f0, f1 = F(x, z0), F(x, z1)
        for t in (0.25, 0.5, 0.75):
            zt = M.geodesic(z0, z1, t)
            defect = F(x, zt) - ((1.0 - t) * f0 + t * f1)
            worst_convex = max(worst_convex, defect)
    return {
        "diagonal_defect": float(worst_diag),
        "skew_excess": float(worst_skew),
        "convexity_defect": float(worst_convex),
        "ok": bool(
            worst_diag <= diag_tol
            and worst_skew <= skew_tol
            and worst_convex <= convexity_tol
        ),
    }


def equilibrium_to_vip(
    prob: EquilibriumProblem, check: bool = True, samples: int = 16, seed: int = 0
) -> VipProblem:
    """Reduce to the VIP driven by the diagonal partial subdifferential."""
    if check:
        report = check_equilibrium_assumptions(prob, count=samples, seed=seed)
        if not report["ok"]:
            raise AssumptionError(
                f"equilibrium bifunction {prob.label!r} failed sampled checks: {report}"
            )
    M = prob.feasible.manifold

    def evaluate(p: ManifoldPoint) -> FieldElement:
        return FieldElement(prob.partial_subgradient(p), 0.0, "exact")

    X = FieldOracle(
        domain=M, evaluate=evaluate, label=f"equilibrium-partial({prob.label})"
    )
    return VipProblem(field=X, feasible=prob.feasible, known_solution=prob.known_solution)


def solve_equilibrium(
    prob: EquilibriumProblem,
    sched: Schedules,
    p0: ManifoldPoint,
    max_iters: int = 500,
    stop_tol: Optional[float] = None,
    prox_coefficient: float = 1.0,
    check: bool = True,
) -> RunRecord:
    return ppm_relative(
        equilibrium_to_vip(prob, check=check),
        scaled_schedules(sched, prox_coefficient),
        p0,
        max_iters=max_iters,
        stop_tol=stop_tol,
    )


# -- nonlinear programming ------------------------------------------------------------


@dataclass(frozen=True)
class NlpEmbedding:
    """Coordinate bookkeeping between (x, mu, lam) and the product manifold."""

    problem: NlpProblem
    product: ManifoldOracle
    m: int
    l: int

    def join(self, x: ManifoldPoint, mu, lam) -> ManifoldPoint:
        mu = np.asarray(mu, dtype=float).reshape(self.m)
        lam = np.asarray(lam, dtype=float).reshape(self.l)
        return self.product.point(np.concatenate([x.coords, mu, lam]))

    def split(self, ptilde: ManifoldPoint):
        M = self.problem.manifold
        a = M.ambient_dim
        x = M.point(ptilde.coords[:a])
        mu = np.asarray(ptilde.coords[a : a + self.m], dtype=float)
        lam = np.asarray(ptilde.coords[a + self.m :], dtype=float)
        return x, mu, lam


def nlp_embedding(prob: NlpProblem) -> NlpEmbedding:
    m, l = len(prob.inequalities), len(prob.equalities)
    factors = [prob.manifold]
    if m:
        factors.append(Euclidean(m))
    if l:
        factors.append(Euclidean(l))
    if len(factors) == 1:
        raise ValueError("an NLP without constraints is just an optimization problem")
    return NlpEmbedding(prob, product_manifold(factors), m, l)


def _kkt_field(prob: NlpProblem, emb: NlpEmbedding) -> FieldOracle:
    M = prob.manifold

    def evaluate(ptilde: ManifoldPoint) -> FieldElement:
        x, mu, lam = emb.split(ptilde)
        grad = prob.objective.subgradient(x).coords.copy()
        gvals = np.empty(emb.m)
        for i, gi in enumerate(prob.inequalities):
            gvals[i] = gi.value(x)
            grad = grad + mu[i] * gi.subgradient(x).coords
        hvals = np.empty(emb.l)
        for j, hj in enumerate(prob.equalities):
            hvals[j] = hj.value(x)
            grad = grad + lam[j] * hj.subgradient(x).coords
        # multiplier blocks carry the negated constraint values so the cross
        # terms cancel and the stacked field stays monotone; its zeros still
        # force g <= 0 (through the nonnegativity box) and h = 0 exactly
        coords = np.concatenate([grad, -gvals, -hvals])
        return FieldElement(TangentVector(ptilde, coords), 0.0, "exact")

    return FieldOracle(domain=emb.product, evaluate=evaluate, label=f"kkt({prob.label})")


def nlp_to_vip(prob: NlpProblem, check: bool = True, seed: int = 0) -> VipProblem:
    """KKT reduction on the multiplier-extended product manifold.

    The feasible set is a box constraining only the inequality-multiplier
    block to be nonnegative; primal feasibility is driven by the field. A
    problem without constraints needs no multipliers and collapses to the
    plain first-order reduction on the original manifold.
    """
    if check:
        rng = np.random.default_rng(seed)
        pts = [prob.manifold.origin()] + [
            prob.manifold.random_point(rng, scale=0.5) for _ in range(2)
        ]
        for c in (prob.objective, *prob.inequalities, *prob.equalities):
            for p in pts:
                check_gradient(c, p, seed=seed)
    if not prob.inequalities and not prob.equalities:
        known = None if prob.known_kkt is None else prob.known_kkt[0]
        return opt_to_vip(
            OptimizationProblem(prob.objective, whole_manifold(prob.manifold), known)
        )
    emb = nlp_embedding(prob)
    lower = np.full(emb.product.ambient_dim, -np.inf)
    upper = np.full(emb.product.ambient_dim, np.inf)
    a = prob.manifold.ambient_dim
    lower[a : a + emb.m] = 0.0
    feasible = box_product(emb.product, lower, upper)
    known = None
    if prob.known_kkt is not None:
        x_star, mu_star, lam_star = prob.known_kkt
        known = emb.join(x_star, mu_star, lam_star)
    return VipProblem(field=_kkt_field(prob, emb), feasible=feasible, known_solution=known)


def solve_nlp(
    prob: NlpProblem,
    sched: Schedules,
    x0: ManifoldPoint,
    mu0=None,
    lam0=None,
    max_iters: int = 500,
    stop_tol: Optional[float] = None,
    prox_coefficient: float = 1.0,
    probe_pairs: int = 64,
) -> RunRecord:
    """Run the relative-error method on the KKT reduction.

    A small monotonicity probe of the stacked field runs first; violations
    are reported as a warning (saddle fields are monotone for convex data,
    so a failure here usually means a bad constraint oracle).
    """
    vip = nlp_to_vip(prob)
    if prob.inequalities or prob.equalities:
        emb = nlp_embedding(prob)
        mu0 = np.zeros(emb.m) if mu0 is None else np.maximum(np.asarray(mu0, float), 0.0)
        lam0 = np.zeros(emb.l) if lam0 is None else np.asarray(lam0, float)
        p0 = emb.join(x0, mu0, lam0)
    else:
        p0 = x0
    if probe_pairs > 0:
        pairs = sample_pairs(vip.field.domain, p0, radius=1.0, count=probe_pairs, seed=7)
        report = monotonicity_probe(vip.field, pairs)
        if report.violations > 0:
            warnings.warn(
                f"KKT field of {prob.label!r} failed the monotonicity probe on "
                f"{report.violations} of {report.pairs} pairs (min gap {report.min_gap:.3e})",
                RuntimeWarning,
                stacklevel=2,
            )
    return ppm_relative(
        vip,
        scaled_schedules(sched, prox_coefficient),
        p0,
        max_iters=max_iters,
        stop_tol=stop_tol,
    )


def kkt_residuals(prob: NlpProblem, ptilde: ManifoldPoint) -> dict:
    """Stationarity, feasibility and complementarity defects at a product
    point (or at a plain manifold point for a constraint-free problem)."""
    if prob.inequalities or prob.equalities:
        x, mu, lam = nlp_embedding(prob).split(ptilde)
    else:
        x, mu, lam = ptilde, np.zeros(0), np.zeros(0)
    M = prob.manifold
    grad = prob.objective.subgradient(x).coords.copy()
    gvals = np.array([gi.value(x) for gi in prob.inequalities])
    hvals = np.array([hj.value(x) for hj in prob.equalities])
    for i, gi in enumerate(prob.inequalities):
        grad = grad + mu[i] * gi.subgradient(x).coords
    for j, hj in enumerate(prob.equalities):
        grad = grad + lam[j] * hj.subgradient(x).coords
    return {
        "stationarity": float(M.norm(TangentVector(x, grad))),
        "inequality": float(np.max(gvals, initial=0.0).clip(min=0.0)),
        "equality": float(np.linalg.norm(hvals)) if len(prob.equalities) else 0.0,
        "complementarity": float(np.max(np.abs(mu * gvals), initial=0.0)),
        "multiplier_min": float(np.min(mu, initial=0.0)),
    }


# -- problem library --------------------------------------------------------------------


@dataclass(frozen=True)
class LibraryEntry:
    label: str
    kind: str  # optimization | equilibrium | nlp | vip
    problem: object
    vip: VipProblem
    start: ManifoldPoint


def _quadratic_objective(M: Euclidean, a: np.ndarray, label: str) -> ConvexFunctionOracle:
    target = a.copy()

    def value(p: ManifoldPoint) -> float:
        d = p.coords - target
        return 0.5 * float(d @ d)

    def subgradient(p: ManifoldPoint) -> TangentVector:
        return M.tangent(p, p.coords - target)

    return ConvexFunctionOracle(M, value, subgradient, label)


def _frechet_objective(M: ManifoldOracle, anchors, label: str) -> ConvexFunctionOracle:
    anchors = tuple(anchors)

    def value(p: ManifoldPoint) -> float:
        return 0.5 * sum(M.dist(p, q) ** 2 for q in anchors)

    def subgradient(p: ManifoldPoint) -> TangentVector:
        total = M.zero_tangent(p)
        for q in anchors:
            total = total - M.log(p, q)
        return total

    return ConvexFunctionOracle(M, value, subgradient, label)


def _build_euclid_quadratic(o: dict) -> LibraryEntry:
    a = np.asarray(o.get("a", [1.0, -2.0]), dtype=float)
    n = int(o.get("n", a.size))
    if a.size != n:
        raise ValueError("override 'a' disagrees with dimension 'n'")
    M = Euclidean(n)
    f = _quadratic_objective(M, a, "euclid-quadratic")
    prob = OptimizationProblem(
        objective=f,
        feasible=whole_manifold(M),
        known_solution=M.point(a),
        strong_modulus=1.0,
    )
    start = M.point(o.get("start", np.full(n, 3.0)))
    return LibraryEntry("euclid-quadratic", "optimization", prob, opt_to_vip(prob), start)


def _build_euclid_ball_projection(o: dict) -> LibraryEntry:
    b = np.asarray(o.get("b", [2.0, 2.0]), dtype=float)
    n = b.size
    M = Euclidean(n)
    center = M.point(o.get("center", np.zeros(n)))
    radius = float(o.get("radius", 1.0))
    f = _quadratic_objective(M, b, "euclid-ball-projection")
    gap = b - center.coords
    gap_norm = float(np.linalg.norm(gap))
    if gap_norm <= radius:
        known = M.point(b)
    else:
        known = M.point(center.coords + (radius / gap_norm) * gap)
    prob = OptimizationProblem(
        objective=f,
        feasible=geodesic_ball(M, center, radius),
        known_solution=known,
        strong_modulus=1.0,
    )
    start = M.point(o.get("start", np.zeros(n)))
    return LibraryEntry(
        "euclid-ball-projection", "optimization", prob, opt_to_vip(prob), start
    )


def _build_spd_frechet_mean(o: dict) -> LibraryEntry:
    anchors_raw = o.get(
        "anchors",
        [
            [[1.0, 0.0], [0.0, 4.0]],
            [[4.0, 0.0], [0.0, 1.0]],
            [[2.0, 0.0], [0.0, 2.0]],
        ],
    )
    mats = [np.asarray(a, dtype=float) for a in anchors_raw]
    n = mats[0].shape[0]
    M = SymmetricPositiveDefinite(n)
    anchors = [M.point(a.reshape(-1)) for a in mats]
    f = _frechet_objective(M, anchors, "spd-frechet-mean")
    known = None
    if all(
        np.allclose(a @ b, b @ a, atol=1e-12) for a in mats for b in mats
    ):  # commuting anchors: the mean is the exponential of the averaged logs
        mean = _sym_expm(sum(_sym_logm(a) for a in mats) / len(mats))
        known = M.point(0.5 * (mean + mean.T).reshape(-1))
    prob = OptimizationProblem(
        objective=f,
        feasible=whole_manifold(M),
        known_solution=known,
        strong_modulus=float(len(anchors)),
    )
    start = M.point(np.asarray(o.get("start", np.eye(n).reshape(-1)), dtype=float))
    return LibraryEntry("spd-frechet-mean", "optimization", prob, opt_to_vip(prob), start)


def _sym_logm(a: np.ndarray) -> np.ndarray:
    w, v = np.linalg.eigh(0.5 * (a + a.T))
    return (v * np.log(w)) @ v.T


def _sym_expm(a: np.ndarray) -> np.ndarray:
    w, v = np.linalg.eigh(0.5 * (a + a.T))
    return (v * np.exp(w)) @ v.T


def _build_hyperbolic_frechet_mean(o: dict) -> LibraryEntry:
    n = int(o.get("n", 2))
    M = Hyperboloid(n)
    base = M.origin()
    if "anchors" in o:
        anchors = [M.point(a) for a in o["anchors"]]
    else:
        t1 = np.zeros(n)
        t1[0] = 1.2
        if n > 1:
            t1[1] = 0.4
        t2 = np.zeros(n)
        t2[0] = -0.9
        if n > 1:
            t2[1] = 0.8
        anchors = [
            M.exp(base, M.tangent_from_intrinsic(base, t1)),
            M.exp(base, M.tangent_from_intrinsic(base, t2)),
        ]
    f = _frechet_objective(M, anchors, "hyperbolic-frechet-mean")
    known = None
    if len(anchors) == 2:  # two anchors: the mean is the geodesic midpoint
        known = M.exp(anchors[0], 0.5 * M.log(anchors[0], anchors[1]))
    prob = OptimizationProblem(
        objective=f,
        feasible=whole_manifold(M),
        known_solution=known,
        strong_modulus=float(len(anchors)),
    )
    start = M.point(o["start"]) if "start" in o else base
    return LibraryEntry(
        "hyperbolic-frechet-mean", "optimization", prob, opt_to_vip(prob), start
    )


def _build_eq_from_opt(o: dict) -> LibraryEntry:
    inner = _build_euclid_quadratic(o)
    f = inner.problem.objective

    def F(x: ManifoldPoint, y: ManifoldPoint) -> float:
        return f.value(y) - f.value(x)

    prob = EquilibriumProblem(
        bifunction=F,
        partial_subgradient=f.subgradient,
        feasible=inner.problem.feasible,
        known_solution=inner.problem.known_solution,
        label="eq-from-opt",
    )
    return LibraryEntry(
        "eq-from-opt", "equilibrium", prob, equilibrium_to_vip(prob), inner.start
    )


def _build_eq_interval(o: dict) -> LibraryEntry:
    lo = float(o.get("lo", 1.0))
    hi = float(o.get("hi", 2.0))
    M = Euclidean(1)
    feasible = box_product(M, np.array([lo]), np.array([hi]))

    def F(x: ManifoldPoint, y: ManifoldPoint) -> float:
        return float(y.coords[0] ** 2 - x.coords[0] ** 2)

    def partial(x: ManifoldPoint) -> TangentVector:
        return M.tangent(x, 2.0 * x.coords)

    known = M.point([np.clip(0.0, lo, hi)])
    prob = EquilibriumProblem(
        bifunction=F,
        partial_subgradient=partial,
        feasible=feasible,
        known_solution=known,
        label="eq-interval",
    )
    start = M.point(o.get("start", [hi]))
    return LibraryEntry("eq-interval", "equilibrium", prob, equilibrium_to_vip(prob), start)


def _affine_constraint(M: Euclidean, w: np.ndarray, c: float, label: str) -> ConvexFunctionOracle:
    weights = w.copy()

    def value(p: ManifoldPoint) -> float:
        return float(weights @ p.coords + c)

    def subgradient(p: ManifoldPoint) -> TangentVector:
        return M.tangent(p, weights)

    return ConvexFunctionOracle(M, value, subgradient, label)


def _shifted_square(M: Euclidean, c: np.ndarray, label: str) -> ConvexFunctionOracle:
    target = c.copy()

    def value(p: ManifoldPoint) -> float:
        d = p.coords - target
        return float(d @ d)

    def subgradient(p: ManifoldPoint) -> TangentVector:
        return M.tangent(p, 2.0 * (p.coords - target))

    return ConvexFunctionOracle(M, value, subgradient, label)


def _build_nlp_toy(label: str, target, o: dict) -> LibraryEntry:
    M = Euclidean(2)
    target = np.asarray(o.get("target", target), dtype=float)
    f = _shifted_square(M, target, f"{label}-objective")
    g = _affine_constraint(M, np.array([1.0, 1.0]), -2.0, f"{label}-budget")
    # analytic KKT point of min |x - t|^2 s.t. x1 + x2 <= 2
    s = float(target.sum())
    if s <= 2.0:
        x_star, mu_star = target, 0.0
    else:
        shift = (s - 2.0) / 2.0
        x_star, mu_star = target - shift, 2.0 * shift
    prob = NlpProblem(
        manifold=M,
        objective=f,
        inequalities=(g,),
        equalities=(),
        known_kkt=(M.point(x_star), np.array([mu_star]), np.array([])),
        label=label,
    )
    emb = nlp_embedding(prob)
    x0 = M.point(o.get("start", [0.0, 0.0]))
    mu0 = np.asarray(o.get("mu0", [1.0]), dtype=float)
    start = emb.join(x0, mu0, np.array([]))
    return LibraryEntry(label, "nlp", prob, nlp_to_vip(prob), start)


def _build_nlp_toy_active(o: dict) -> LibraryEntry:
    return _build_nlp_toy("nlp-toy-active", np.array([2.0, 2.0]), o)


def _build_nlp_toy_inactive(o: dict) -> LibraryEntry:
    return _build_nlp_toy("nlp-toy-inactive", np.array([0.5, 0.5]), o)


def _build_nlp_toy_equality(o: dict) -> LibraryEntry:
    M = Euclidean(2)
    f = _shifted_square(M, np.zeros(2), "nlp-toy-equality-objective")
    h = _affine_constraint(M, np.array([1.0, 0.0]), -1.0, "nlp-toy-equality-pin")
    prob = NlpProblem(
        manifold=M,
        objective=f,
        inequalities=(),
        equalities=(h,),
        known_kkt=(M.point([1.0, 0.0]), np.array([]), np.array([-2.0])),
        label="nlp-toy-equality",
    )
    emb = nlp_embedding(prob)
    x0 = M.point(o.get("start", [0.0, 0.0]))
    lam0 = np.asarray(o.get("lam0", [0.0]), dtype=float)
    start = emb.join(x0, np.array([]), lam0)
    return LibraryEntry("nlp-toy-equality", "nlp", prob, nlp_to_vip(prob), start)


def _build_euclid_quadratic_negated(o: dict) -> LibraryEntry:
    inner = _build_euclid_quadratic(o)
    X = negated_field(inner.vip.field, "euclid-quadratic-negated")
    vip = VipProblem(field=X, feasible=inner.vip.feasible, known_solution=None)
    return LibraryEntry("euclid-quadratic-negated", "vip", vip, vip, inner.start)


_BUILDERS = {
    "euclid-quadratic": _build_euclid_quadratic,
    "euclid-ball-projection": _build_euclid_ball_projection,
    "spd-frechet-mean": _build_spd_frechet_mean,
    "hyperbolic-frechet-mean": _build_hyperbolic_frechet_mean,
    "eq-from-opt": _build_eq_from_opt,
    "eq-interval": _build_eq_interval,
    "nlp-toy-active": _build_nlp_toy_active,
    "nlp-toy-inactive": _build_nlp_toy_inactive,
    "nlp-toy-equality": _build_nlp_toy_equality,
    "euclid-quadratic-negated": _build_euclid_quadratic_negated,
}


def library_labels() -> list:
    return sorted(_BUILDERS)


def library_entry(name: str, overrides: Optional[dict] = None) -> LibraryEntry:
    if name not in _BUILDERS:
        raise ValueError(f"unknown problem label {name!r}; known: {library_labels()}")
    return _BUILDERS[name](dict(overrides or {}))


def problem_library(name: str, overrides: Optional[dict] = None):
    """Fully specified instance for a library label (the typed problem object)."""
    return library_entry(name, overrides).problem

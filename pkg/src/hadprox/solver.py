"""Inexact proximal point iterations for variational inequalities on Hadamard
manifolds, with per-iteration convergence certificates.

One outer iteration anchored at p^k solves, approximately, the regularized
inclusion

    e  in  X(p) + N_Omega(p) - lam_k * log_p(p^k),

and accepts p^{k+1} = p under one of two error criteria:

* absolute: ||e|| <= theta_k, with summable theta;
* relative: ||e|| <= sigma_k * d(p^k, p^{k+1}), with summable sigma.

The inner solver runs a projected forward-backward sweep on the regularized
field w(p) = u(p) - lam * log_p(anchor): step to exp_p(-gamma * w), project
onto the feasible set, and re-evaluate. The residual is assembled
constructively as e = u + n - lam * log_{p}(anchor) with n the normal-cone
component supplied by the feasible set, so the inclusion holds exactly for
the stored witnesses (u, n) and can be re-audited from the run record.

Divergence or stalling of the sweep triggers a step-halving ladder (the local
curvature bound L is replaced by 2L + lam, which exactly halves
gamma = 1/(lam + L)); the ladder gives up after 20 rungs and the whole sweep
after 10^4 evaluations, which surfaces as a "subproblem-failure" run status.

Fejer monotonicity toward any solution q is certified a posteriori: for
every iteration past the first index with theta_k < lam_k/2 (respectively
sigma_k < lam_k/2) the recorded quantities must satisfy

    d^2(q, p^{k+1}) <= (1 + 2 theta_k/lam_hat) d^2(q, p^k)
                       - d^2(p^{k+1}, p^k) + (2/lam_hat)(theta_k + 2 eps_k)

(absolute; the relative bound carries (1 + 2 sigma_k/lam_hat) and
(4/lam_hat) eps_k). ``fejer_certificate_*`` return the per-iteration slack of
that inequality, nonnegative up to roundoff when the run is sound.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field, replace
from typing import Callable, Optional

import numpy as np

from .fields import (
    FeasibilityError,
    FeasibleSet,
    FieldElement,
    FieldOracle,
    normal_element,
)
from .manifold import ManifoldOracle, ManifoldPoint, TangentVector

__all__ = [
    "EXACT_FLOOR",
    "GeometricSchedule",
    "Schedules",
    "VipProblem",
    "RunRecord",
    "SubproblemResult",
    "SubproblemFailure",
    "LivelockError",
    "Diagnostics",
    "STATUS_CONVERGED",
    "STATUS_MAX_ITERS",
    "STATUS_STALLED",
    "STATUS_FAILURE",
    "solve_subproblem",
    "ppm_absolute",
    "ppm_relative",
    "fejer_certificate_abs",
    "fejer_certificate_rel",
    "fejer_start_index",
    "quasi_fejer_check",
    "diagnostics",
    "audit_inclusion",
    "audit_error_criteria",
    "run_csv_header",
    "run_csv_rows",
    "write_run_csv",
    "run_record_payload",
    "scaled_schedules",
]

EXACT_FLOOR = 1e-12
MAX_INNER_STEPS = 10_000
MAX_HALVINGS = 20
STALL_WINDOW = 50

STATUS_CONVERGED = "converged"
STATUS_MAX_ITERS = "max-iters"
STATUS_STALLED = "stalled"
STATUS_FAILURE = "subproblem-failure"


class SubproblemFailure(RuntimeError):
    """Inner solver could not meet its residual target within its budgets."""

    def __init__(self, message: str, best_norm: float = math.nan, steps: int = 0):
        super().__init__(message)
        self.best_norm = best_norm
        self.steps = steps


class LivelockError(RuntimeError):
    """Relative acceptance kept chasing its own moving target."""


# -- schedules -----------------------------------------------------------------


@dataclass(frozen=True)
class GeometricSchedule:
    """k -> initial * ratio^k with closed-form partial sums.

    A positive sequence needs ratio in (0, 1) so the total sum is finite; the
    constant-zero schedule may use any ratio in (0, 1].
    """

    initial: float
    ratio: float = 0.9

    def __post_init__(self):
        if not np.isfinite(self.initial) or self.initial < 0.0:
            raise ValueError("schedule initial value must be finite and nonnegative")
        if not (0.0 < self.ratio <= 1.0):
            raise ValueError("schedule ratio must lie in (0, 1]")
        if self.initial > 0.0 and self.ratio >= 1.0:
            raise ValueError("a positive schedule needs ratio < 1 to be summable")

    def value(self, k: int) -> float:
        return self.initial * self.ratio**k

    def partial_sum(self, k: int) -> float:
        """Sum of the first k terms."""
        if self.initial == 0.0:
            return 0.0
        return self.initial * (1.0 - self.ratio**k) / (1.0 - self.ratio)

    def total(self) -> float:
        if self.initial == 0.0:
            return 0.0
        return self.initial / (1.0 - self.ratio)


@dataclass(frozen=True)
class Schedules:
    """Proximal parameter and error schedules for one run.

    ``lam`` is the constant proximal parameter (so its lower and upper bounds
    coincide); theta/sigma are the absolute/relative error schedules, present
    when the corresponding algorithm is used; eps budgets the enlargement of
    accepted field elements.
    """

    lam: float = 1.0
    theta: Optional[GeometricSchedule] = None
    sigma: Optional[GeometricSchedule] = None
    eps: GeometricSchedule = GeometricSchedule(0.0, 0.9)

    def __post_init__(self):
        if not np.isfinite(self.lam) or self.lam <= 0.0:
            raise ValueError("lam must be finite and positive")

    def lam_value(self, k: int) -> float:
        return self.lam

    @property
    def lam_min(self) -> float:
        return self.lam

    @property
    def lam_max(self) -> float:
        return self.lam

    @classmethod
    def geometric(
        cls,
        lam: float = 1.0,
        theta0: Optional[float] = None,
        sigma0: Optional[float] = None,
        eps0: float = 0.0,
        decay: float = 0.9,
    ) -> "Schedules":
        return cls(
            lam=lam,
            theta=None if theta0 is None else GeometricSchedule(theta0, decay),
            sigma=None if sigma0 is None else GeometricSchedule(sigma0, decay),
            eps=GeometricSchedule(eps0, decay),
        )


def scaled_schedules(sched: Schedules, coefficient: float) -> Schedules:
    """Scale the proximal parameter (e.g. by a driver's prox_coefficient)."""
    if coefficient == 1.0:
        return sched
    return replace(sched, lam=coefficient * sched.lam)


# -- problem and record ----------------------------------------------------------


@dataclass(frozen=True)
class VipProblem:
    """Find p in the feasible set with 0 in X(p) + N(p)."""

    field: FieldOracle
    feasible: FeasibleSet
    known_solution: Optional[ManifoldPoint] = None

    def __post_init__(self):
        if self.field.domain.manifold_id != self.feasible.manifold.manifold_id:
            raise ValueError("field domain and feasible set live on different manifolds")
        if self.known_solution is not None and not self.feasible.membership(
            self.known_solution
        ):
            raise ValueError("declared solution is not feasible")


@dataclass
class RunRecord:
    """Everything one run logged, sufficient to re-audit it from scratch."""

    manifold: ManifoldOracle
    mode: str
    iterates: list = field(default_factory=list)
    residuals: list = field(default_factory=list)
    step_dists: list = field(default_factory=list)
    eps_used: list = field(default_factory=list)
    elements: list = field(default_factory=list)
    normals: list = field(default_factory=list)
    lambdas: list = field(default_factory=list)
    fejer_slacks: list = field(default_factory=list)
    status: str = STATUS_MAX_ITERS
    message: str = ""
    stop_tol: float = math.nan
    known_solution: Optional[ManifoldPoint] = None

    def iterations(self) -> int:
        return len(self.step_dists)

    def residual_norms(self) -> list:
        return [self.manifold.norm(e) for e in self.residuals]

    def validate(self, tol: float = 1e-12) -> None:
        n = len(self.step_dists)
        if (
            len(self.iterates) != n + 1
            or len(self.residuals) != n
            or len(self.eps_used) != n
            or len(self.elements) != n
            or len(self.normals) != n
            or len(self.lambdas) != n
        ):
            raise ValueError("run record arrays have inconsistent lengths")
        if self.status not in (
            STATUS_CONVERGED,
            STATUS_MAX_ITERS,
            STATUS_STALLED,
            STATUS_FAILURE,
        ):
            raise ValueError(f"unknown status {self.status!r}")
        for k in range(n):
            d = self.manifold.dist(self.iterates[k], self.iterates[k + 1])
            if abs(d - self.step_dists[k]) > tol * (1.0 + d):
                raise ValueError(f"step distance at iteration {k} does not recompute")


# -- inner solver ----------------------------------------------------------------


@dataclass(frozen=True)
class SubproblemResult:
    p_new: ManifoldPoint
    element: FieldElement
    normal: TangentVector
    residual: TangentVector
    residual_norm: float
    inner_steps: int
    gamma: float
    lipschitz: float


def _residual_at(
    X: FieldOracle,
    S: FeasibleSet,
    M: ManifoldOracle,
    p: ManifoldPoint,
    anchor: ManifoldPoint,
    lam: float,
):
    el = X.at(p)
    w_reg = el.vector - lam * M.log(p, anchor)
    n = normal_element(S, p, -1.0 * w_reg)
    e = w_reg + n
    return el, n, e, M.norm(e), w_reg


def _estimate_lipschitz(X: FieldOracle, M: ManifoldOracle, p: ManifoldPoint, v0) -> float:
    z = v0
    if M.norm(z) < 1e-14:
        probe = np.zeros(M.dimension)
        probe[0] = 1.0
        z = M.tangent_from_intrinsic(p, probe)
    nz = M.norm(z)
    if nz < 1e-14:
        return 1.0
    p1 = M.exp(p, (1e-4 / nz) * z)
    d = M.dist(p, p1)
    if d < 1e-14:
        return 1.0
    diff = M.transport(p1, p, X.at(p1).vector) - v0
    est = M.norm(diff) / d
    if not np.isfinite(est):
        return 1.0
    return est


def solve_subproblem(
    prob: VipProblem,
    anchor: ManifoldPoint,
    lam: float,
    inner_tol: float,
    eps_budget: float,
    accept: Optional[Callable[[float, float], bool]] = None,
) -> SubproblemResult:
    """One regularized resolvent step anchored at ``anchor``.

    The default acceptance takes the first candidate whose residual norm is
    at most ``inner_tol``; a custom ``accept(e_norm, dist_from_anchor)`` is
    how the relative criterion re-evaluates its moving target. The anchor
    itself is returned only when it is an exact solution (residual at the
    1e-12 floor): accepting it under a loose tolerance would fabricate a
    fixed point and stall the outer loop far from the solution set.
    """
    M = prob.field.domain
    if lam <= 0.0 or not np.isfinite(lam):
        raise ValueError("lam must be positive")
    if inner_tol <= 0.0:
        raise ValueError("inner_tol must be positive")
    if not prob.feasible.membership(anchor):
        raise FeasibilityError("subproblem anchor is infeasible")
    if accept is None:

        def accept(e_norm: float, d_anchor: float) -> bool:
            return e_norm <= inner_tol

    el, n, e, e_norm, w = _residual_at(prob.field, prob.feasible, M, anchor, anchor, lam)
    if el.epsilon <= eps_budget + 1e-15 and e_norm <= EXACT_FLOOR:
        return SubproblemResult(anchor, el, n, e, e_norm, 0, 0.0, 0.0)

    lips = _estimate_lipschitz(prob.field, M, anchor, el.vector)
    gamma = 1.0 / (lam + lips)

    p_cur, w_cur = anchor, w
    best = (anchor, el, n, e, e_norm, w)
    best_norm = e_norm
    mark_norm = e_norm
    since_improve = 0
    halvings = 0

    for step in range(1, MAX_INNER_STEPS + 1):
        cand = prob.feasible.project(M.exp(p_cur, (-gamma) * w_cur))
        el_c, n_c, e_c, norm_c, w_c = _residual_at(
            prob.field, prob.feasible, M, cand, anchor, lam
        )
        d_c = M.dist(anchor, cand)
        if el_c.epsilon <= eps_budget + 1e-15 and (
            norm_c <= EXACT_FLOOR or (d_c > 0.0 and accept(norm_c, d_c))
        ):
            return SubproblemResult(cand, el_c, n_c, e_c, norm_c, step, gamma, lips)

        if np.isfinite(norm_c) and norm_c < best_norm:
            best = (cand, el_c, n_c, e_c, norm_c, w_c)
            best_norm = norm_c
        if np.isfinite(norm_c) and norm_c <= (1.0 - 1e-3) * mark_norm:
            mark_norm = norm_c
            since_improve = 0
        else:
            since_improve += 1

        exploded = not np.isfinite(norm_c) or norm_c > 10.0 * best_norm + 1e-12
        if exploded or since_improve >= STALL_WINDOW:
            halvings += 1
            if halvings > MAX_HALVINGS:
                raise SubproblemFailure(
                    "inner residual target unmet after the step-halving ladder",
                    best_norm,
                    step,
                )
            lips = 2.0 * lips + lam  # halves gamma exactly
            gamma = 1.0 / (lam + lips)
            p_cur, w_cur = best[0], best[5]
            mark_norm = best_norm
            since_improve = 0
            continue

        p_cur, w_cur = cand, w_c

    raise SubproblemFailure(
        "inner step budget exhausted before meeting the residual target",
        best_norm,
        MAX_INNER_STEPS,
    )


# -- outer loops -------------------------------------------------------------------


def _run_outer(
    prob: VipProblem,
    sched: Schedules,
    p0: ManifoldPoint,
    max_iters: int,
    stop_tol: Optional[float],
    mode: str,
    make_accept,
    inner_tol_fn,
) -> RunRecord:
    M = prob.field.domain
    if max_iters < 0:
        raise ValueError("max_iters must be nonnegative")
    if not prob.feasible.membership(p0):
        raise FeasibilityError("starting point is infeasible")
    p0 = prob.feasible.project(p0)

    rec = RunRecord(manifold=M, mode=mode, known_solution=prob.known_solution)
    rec.iterates.append(p0)
    status = STATUS_MAX_ITERS

    for k in range(max_iters):
        lam_k = sched.lam_value(k)
        eps_k = sched.eps.value(k)
        anchor = rec.iterates[-1]
        try:
            res = solve_subproblem(
                prob,
                anchor,
                lam_k,
                inner_tol_fn(k),
                eps_k,
                accept=make_accept(k) if make_accept is not None else None,
            )
        except LivelockError as exc:
            status = STATUS_STALLED
            rec.message = str(exc)
            break
        except SubproblemFailure as exc:
            status = STATUS_FAILURE
            rec.message = str(exc)
            break

        step = M.dist(anchor, res.p_new)
        rec.iterates.append(res.p_new)
        rec.elements.append(res.element)
        rec.normals.append(res.normal)
        rec.residuals.append(res.residual)
        rec.eps_used.append(res.element.epsilon)
        rec.step_dists.append(step)
        rec.lambdas.append(lam_k)

        if stop_tol is None:
            stop_tol = 1e-9 * (1.0 + step)
        if step <= stop_tol:
            status = STATUS_CONVERGED
            break

    rec.status = status
    rec.stop_tol = float(stop_tol) if stop_tol is not None else math.nan
    if prob.known_solution is not None and rec.step_dists:
        if mode == "absolute":
            rec.fejer_slacks = fejer_certificate_abs(rec, prob.known_solution, sched)
        else:
            rec.fejer_slacks = fejer_certificate_rel(rec, prob.known_solution, sched)
    return rec


def ppm_absolute(
    prob: VipProblem,
    sched: Schedules,
    p0: ManifoldPoint,
    max_iters: int = 500,
    stop_tol: Optional[float] = None,
) -> RunRecord:
    """Proximal point iteration under the summable absolute error criterion.

    Iteration k accepts the inner candidate once ||e|| <= theta_k (with the
    exact floor 1e-12 when theta_k = 0) and the accepted element's epsilon
    fits the eps_k budget. Stops when d(p^k, p^{k+1}) <= stop_tol (default
    1e-9 * (1 + first step)) or after max_iters. Inner failures end the run
    with a partial record and status "subproblem-failure".
    """
    if sched.theta is None:
        raise ValueError("absolute runs need a theta schedule")

    def inner_tol_fn(k: int) -> float:
        theta_k = sched.theta.value(k)
        return theta_k if theta_k > EXACT_FLOOR else EXACT_FLOOR

    return _run_outer(prob, sched, p0, max_iters, stop_tol, "absolute", None, inner_tol_fn)


class _RelativeAcceptance:
    """Acceptance test ||e|| <= sigma * d(anchor, candidate), with thrash guard.

    The target moves with the candidate; if a candidate would have passed the
    previous target more than ``max_thrash`` times while failing its own, the
    iteration is declared livelocked.
    """

    def __init__(self, sigma: float, max_thrash: int = 50):
        self.sigma = sigma
        self.max_thrash = max_thrash
        self.prev_target: Optional[float] = None
        self.thrash = 0

    def __call__(self, e_norm: float, d_anchor: float) -> bool:
        target = self.sigma * d_anchor
        ok = e_norm <= target or e_norm <= EXACT_FLOOR
        if not ok and self.prev_target is not None and e_norm <= self.prev_target:
            self.thrash += 1
            if self.thrash > self.max_thrash:
                raise LivelockError(
                    "relative acceptance thrashed more than "
                    f"{self.max_thrash} times in one outer iteration"
                )
        self.prev_target = target
        return ok


def ppm_relative(
    prob: VipProblem,
    sched: Schedules,
    p0: ManifoldPoint,
    max_iters: int = 500,
    stop_tol: Optional[float] = None,
) -> RunRecord:
    """Proximal point iteration under the relative error criterion.

    Iteration k accepts once ||e|| <= sigma_k * d(p^k, candidate), re-checked
    at every inner candidate since the right side moves with it; the exact
    floor 1e-12 also accepts, which covers sigma_k = 0 and collapse of the
    step below stop_tol. More than 50 thrashes of the moving target in one
    outer iteration ends the run with status "stalled".
    """
    if sched.sigma is None:
        raise ValueError("relative runs need a sigma schedule")

    def make_accept(k: int) -> _RelativeAcceptance:
        return _RelativeAcceptance(sched.sigma.value(k))

    def inner_tol_fn(k: int) -> float:
        return EXACT_FLOOR

    return _run_outer(
        prob, sched, p0, max_iters, stop_tol, "relative", make_accept, inner_tol_fn
    )


# -- certificates -------------------------------------------------------------------


def fejer_start_index(sched: Schedules, mode: str, max_k: int = 10_000) -> int:
    """First iteration index whose error parameter drops below lam_k / 2."""
    seq = sched.theta if mode == "absolute" else sched.sigma
    if seq is None:
        raise ValueError(f"schedules carry no error sequence for mode {mode!r}")
    for k in range(max_k):
        if seq.value(k) < sched.lam_value(k) / 2.0:
            return k
    raise ValueError("error schedule never drops below lam/2")


def fejer_certificate_abs(rec: RunRecord, q: ManifoldPoint, sched: Schedules) -> list:
    """Per-iteration slack of the absolute-mode Fejer inequality toward q."""
    if sched.theta is None:
        raise ValueError("absolute certificate needs a theta schedule")
    M = rec.manifold
    lam_hat = sched.lam_min
    slacks = []
    d_prev = M.dist(q, rec.iterates[0])
    for k in range(len(rec.step_dists)):
        theta_k = sched.theta.value(k)
        eps_k = sched.eps.value(k)
        d_next = M.dist(q, rec.iterates[k + 1])
        step = rec.step_dists[k]
        bound = (
            (1.0 + 2.0 * theta_k / lam_hat) * d_prev * d_prev
            - step * step
            + (2.0 / lam_hat) * (theta_k + 2.0 * eps_k)
        )
        slacks.append(bound - d_next * d_next)
        d_prev = d_next
    return slacks


def fejer_certificate_rel(rec: RunRecord, q: ManifoldPoint, sched: Schedules) -> list:
    """Per-iteration slack of the relative-mode Fejer inequality toward q."""
    if sched.sigma is None:
        raise ValueError("relative certificate needs a sigma schedule")
    M = rec.manifold
    lam_hat = sched.lam_min
    slacks = []
    d_prev = M.dist(q, rec.iterates[0])
    for k in range(len(rec.step_dists)):
        sigma_k = sched.sigma.value(k)
        eps_k = sched.eps.value(k)
        d_next = M.dist(q, rec.iterates[k + 1])
        step = rec.step_dists[k]
        bound = (
            (1.0 + 2.0 * sigma_k / lam_hat) * d_prev * d_prev
            - step * step
            + (4.0 / lam_hat) * eps_k
        )
        slacks.append(bound - d_next * d_next)
        d_prev = d_next
    return slacks


def quasi_fejer_check(
    zeta,
    gamma,
    beta,
    tol: float = 1e-9,
    tail_fraction: float = 0.1,
    settle_tol: float = 1e-6,
) -> bool:
    """Certify zeta_{k+1} <= (1 + gamma_k) zeta_k + beta_k termwise and that
    the tail of zeta has numerically settled (the testable shadow of
    convergence of a quasi-Fejer sequence under summable perturbations)."""
    zeta = np.asarray(zeta, dtype=float)
    gamma = np.asarray(gamma, dtype=float)
    beta = np.asarray(beta, dtype=float)
    n = len(zeta)
    if n == 0:
        raise ValueError("empty sequence")
    if len(gamma) < n - 1 or len(beta) < n - 1:
        raise ValueError("perturbation sequences shorter than the main sequence")
    if np.any(gamma[: n - 1] < 0.0) or np.any(beta[: n - 1] < 0.0):
        raise ValueError("perturbation sequences must be nonnegative")
    for k in range(n - 1):
        if zeta[k + 1] > (1.0 + gamma[k]) * zeta[k] + beta[k] + tol:
            return False
    tail = zeta[n - max(1, int(math.ceil(n * tail_fraction))) :]
    return bool(tail.max() - tail.min() <= settle_tol)


# -- diagnostics and audits -----------------------------------------------------------


@dataclass(frozen=True)
class Diagnostics:
    status: str
    iterations: int
    step_dist_tail: float
    residual_tail: float
    dist_to_solution_tail: Optional[float]


def diagnostics(rec: RunRecord, window: int = 10) -> Diagnostics:
    """Tail maxima over the last ``window`` iterations of a run."""
    if window < 1:
        raise ValueError("window must be at least 1")
    steps = rec.step_dists[-window:]
    norms = [rec.manifold.norm(e) for e in rec.residuals[-window:]]
    dist_tail = None
    if rec.known_solution is not None:
        dist_tail = max(
            rec.manifold.dist(p, rec.known_solution) for p in rec.iterates[-window:]
        )
    return Diagnostics(
        status=rec.status,
        iterations=rec.iterations(),
        step_dist_tail=max(steps) if steps else 0.0,
        residual_tail=max(norms) if norms else 0.0,
        dist_to_solution_tail=dist_tail,
    )


def audit_inclusion(rec: RunRecord) -> float:
    """Worst coordinate deviation between stored residuals and
    u + n - lam * log(p^{k+1}, p^k) recomputed from the stored witnesses."""
    M = rec.manifold
    worst = 0.0
    for k in range(len(rec.step_dists)):
        lg = M.log(rec.iterates[k + 1], rec.iterates[k])
        recomputed = rec.elements[k].vector + rec.normals[k] - rec.lambdas[k] * lg
        dev = float(np.abs(recomputed.coords - rec.residuals[k].coords).max(initial=0.0))
        worst = max(worst, dev)
    return worst


def audit_error_criteria(rec: RunRecord, sched: Schedules, tol: float = 1e-12) -> int:
    """Number of iterations whose accepted residual violates the run's
    error criterion, recomputed from the stored residual vectors."""
    violations = 0
    norms = rec.residual_norms()
    for k, e_norm in enumerate(norms):
        if rec.mode == "absolute":
            budget = max(sched.theta.value(k), EXACT_FLOOR)
        else:
            budget = max(sched.sigma.value(k) * rec.step_dists[k], EXACT_FLOOR)
        if e_norm > budget + tol:
            violations += 1
    return violations


# -- serialization ---------------------------------------------------------------------


def _fmt(x: float) -> str:
    return repr(float(x))


def run_csv_header(rec: RunRecord) -> list:
    ambient = rec.manifold.ambient_dim
    return (
        ["k"]
        + [f"p_coords_{i}" for i in range(ambient)]
        + ["e_norm", "step_dist", "eps_k", "fejer_slack"]
    )


def run_csv_rows(rec: RunRecord) -> list:
    rows = []
    norms = rec.residual_norms()
    for k, p in enumerate(rec.iterates):
        row = [str(k)] + [_fmt(x) for x in p.coords]
        if k == 0:
            row += ["", "", "", ""]
        else:
            slack = _fmt(rec.fejer_slacks[k - 1]) if len(rec.fejer_slacks) >= k else ""
            row += [_fmt(norms[k - 1]), _fmt(rec.step_dists[k - 1]), _fmt(rec.eps_used[k - 1]), slack]
        rows.append(row)
    return rows


def write_run_csv(rec: RunRecord, path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(run_csv_header(rec))
        writer.writerows(run_csv_rows(rec))


def run_record_payload(rec: RunRecord) -> dict:
    """JSON-ready dict of the full record (floats keep full precision)."""
    return {
        "manifold_id": rec.manifold.manifold_id,
        "mode": rec.mode,
        "status": rec.status,
        "message": rec.message,
        "stop_tol": None if math.isnan(rec.stop_tol) else rec.stop_tol,
        "iterations": rec.iterations(),
        "iterates": [[float(x) for x in p.coords] for p in rec.iterates],
        "residuals": [[float(x) for x in e.coords] for e in rec.residuals],
        "residual_norms": [float(v) for v in rec.residual_norms()],
        "step_dists": [float(v) for v in rec.step_dists],
        "eps_used": [float(v) for v in rec.eps_used],
        "lambdas": [float(v) for v in rec.lambdas],
        "fejer_slacks": [float(v) for v in rec.fejer_slacks],
        "known_solution": None
        if rec.known_solution is None
        else [float(x) for x in rec.known_solution.coords],
    }

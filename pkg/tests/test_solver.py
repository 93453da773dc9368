"""Outer loops, inner resolvent, schedules, certificates, audits, logging.

Closed-form oracles used throughout: the regularized step on the Euclidean
line quadratic (x - a) has the unique solution (a + lam * anchor)/(1 + lam),
so exact-mode iterates follow x^{k+1} = (lam * x^k + a)/(1 + lam); for
commuting diagonal matrices the affine-invariant geometry factors into
scalar log coordinates and the same recursion applies entrywise to log p.
The constrained quadratic over a ball has the projected unconstrained
minimizer in closed form. Expected sequences are recomputed with plain
Python floats next to each assertion.
"""

import math

import numpy as np
import pytest

import hadprox as hp
from hadprox import (
    FeasibilityError,
    FieldElement,
    FieldOracle,
    GeometricSchedule,
    LivelockError,
    RunRecord,
    Schedules,
    SubproblemFailure,
    VipProblem,
)
from hadprox.solver import _RelativeAcceptance


@pytest.fixture(scope="module")
def line():
    return hp.Euclidean(1)


def line_quadratic(line, a=0.0, modulus=1.0):
    """VIP for grad of half the squared distance to ``a`` on the line."""
    sol = line.point([a])
    field = FieldOracle(
        line,
        lambda p: FieldElement(line.tangent(p, p.coords - a)),
        strong_modulus=modulus,
        label=f"line-quadratic({a})",
    )
    return VipProblem(field, hp.whole_manifold(line), known_solution=sol)


def exact_schedules(lam=1.0):
    return Schedules.geometric(lam=lam, theta0=0.0, sigma0=0.0)


class TestSchedules:
    def test_geometric_values_and_sums(self):
        g = GeometricSchedule(1.0, 0.5)
        assert [g.value(k) for k in range(4)] == [1.0, 0.5, 0.25, 0.125]
        assert g.partial_sum(3) == 1.75
        assert g.total() == 2.0
        z = GeometricSchedule(0.0, 1.0)
        assert z.value(5) == 0.0 and z.total() == 0.0

    def test_partial_sums_nondecreasing_and_bounded(self):
        g = GeometricSchedule(0.3, 0.9)
        sums = [g.partial_sum(k) for k in range(200)]
        assert all(b >= a for a, b in zip(sums, sums[1:]))
        assert sums[-1] <= g.total() + 1e-12

    def test_validation(self):
        with pytest.raises(ValueError, match="nonnegative"):
            GeometricSchedule(-0.1, 0.5)
        with pytest.raises(ValueError, match="ratio"):
            GeometricSchedule(1.0, 0.0)
        with pytest.raises(ValueError, match="ratio"):
            GeometricSchedule(1.0, 1.5)
        with pytest.raises(ValueError, match="summable"):
            GeometricSchedule(1.0, 1.0)
        with pytest.raises(ValueError, match="lam"):
            Schedules(lam=0.0)

    def test_geometric_constructor(self):
        s = Schedules.geometric(lam=2.0, theta0=0.5, eps0=0.1, decay=0.8)
        assert s.lam_value(7) == 2.0 and s.lam_min == s.lam_max == 2.0
        assert s.theta.value(1) == 0.4
        assert s.sigma is None
        assert s.eps.value(0) == 0.1

    def test_scaled_schedules(self):
        s = Schedules.geometric(lam=1.0, theta0=0.5)
        assert hp.scaled_schedules(s, 1.0) is s
        t = hp.scaled_schedules(s, 2.5)
        assert t.lam == 2.5 and t.theta is s.theta


class TestSubproblem:
    def test_line_resolvent_closed_form(self, line):
        prob = line_quadratic(line, a=0.0)
        res = hp.solve_subproblem(prob, line.point([2.0]), 1.0, 1e-10, 0.0)
        # unique solution (a + lam * anchor)/(1 + lam) = 1
        assert abs(res.p_new.coords[0] - 1.0) < 1e-9
        assert res.residual_norm <= 1e-10
        assert res.element.epsilon == 0.0

    def test_anchor_at_solution_returned(self, line):
        prob = line_quadratic(line, a=0.7)
        res = hp.solve_subproblem(prob, line.point([0.7]), 1.0, 1e-6, 0.0)
        assert res.p_new.coords[0] == 0.7
        assert res.inner_steps == 0
        assert res.residual_norm <= 1e-12

    def test_loose_tolerance_never_fabricates_fixed_point(self, line):
        # a huge inner_tol must not let the anchor pass as its own solution
        prob = line_quadratic(line, a=0.0)
        res = hp.solve_subproblem(prob, line.point([2.0]), 1.0, 10.0, 0.0)
        assert res.p_new.coords[0] != 2.0
        assert line.dist(res.p_new, line.point([2.0])) > 0.0

    def test_residual_assembled_from_witnesses(self, line):
        prob = line_quadratic(line, a=0.3)
        anchor = line.point([2.0])
        res = hp.solve_subproblem(prob, anchor, 0.5, 1e-10, 0.0)
        rebuilt = (
            res.element.vector + res.normal - 0.5 * line.log(res.p_new, anchor)
        )
        assert np.abs(rebuilt.coords - res.residual.coords).max() <= 1e-15

    def test_constrained_step_projects_and_records_normal(self):
        # quadratic pulled toward b outside the unit ball: the regularized
        # minimizer (b + lam * anchor)/(1 + lam) leaves the ball, so the
        # solution is its radial projection and the normal component is live
        E = hp.Euclidean(2)
        b = np.array([3.0, 4.0])
        field = FieldOracle(
            E, lambda p: FieldElement(E.tangent(p, p.coords - b)), strong_modulus=1.0
        )
        ball = hp.geodesic_ball(E, E.origin(), 1.0)
        prob = VipProblem(field, ball, known_solution=E.point(b / 5.0))
        anchor = E.point([0.1, 0.0])
        res = hp.solve_subproblem(prob, anchor, 1.0, 1e-9, 0.0)
        m = (b + 1.0 * anchor.coords) / 2.0
        expected = m / np.linalg.norm(m)
        assert np.abs(res.p_new.coords - expected).max() < 1e-7
        assert abs(np.linalg.norm(res.p_new.coords) - 1.0) < 1e-9
        assert E.norm(res.normal) > 0.1
        assert res.residual_norm <= 1e-9

    def test_commuting_matrices_reduce_to_scalar_recursion(self, spd2):
        M = spd2
        a1 = M.point(np.diag([1.0, 4.0]).ravel())
        a2 = M.point(np.diag([4.0, 1.0]).ravel())
        field = FieldOracle(
            M,
            lambda p: FieldElement((-0.5) * (M.log(p, a1) + M.log(p, a2))),
            strong_modulus=1.0,
            label="frechet-mean-pair",
        )
        prob = VipProblem(field, hp.whole_manifold(M))
        anchor = M.origin()
        y = 0.0  # both log-eigenvalues share one scalar trajectory
        m = 0.5 * (math.log(1.0) + math.log(4.0))
        for _ in range(5):
            res = hp.solve_subproblem(prob, anchor, 1.0, 1e-12, 0.0)
            y = (m + y) / 2.0
            got = res.p_new.coords.reshape(2, 2)
            assert abs(got[0, 0] - math.exp(y)) < 1e-8
            assert abs(got[1, 1] - math.exp(y)) < 1e-8
            assert abs(got[0, 1]) < 1e-9 and abs(got[1, 0]) < 1e-9
            anchor = res.p_new

    def test_validation(self, line):
        prob = line_quadratic(line)
        p = line.point([1.0])
        with pytest.raises(ValueError, match="lam"):
            hp.solve_subproblem(prob, p, 0.0, 1e-6, 0.0)
        with pytest.raises(ValueError, match="inner_tol"):
            hp.solve_subproblem(prob, p, 1.0, 0.0, 0.0)
        ball = hp.geodesic_ball(line, line.point([0.0]), 1.0)
        constrained = VipProblem(prob.field, ball)
        with pytest.raises(FeasibilityError, match="anchor"):
            hp.solve_subproblem(constrained, line.point([5.0]), 1.0, 1e-6, 0.0)

    def test_divergent_field_exhausts_ladder(self, line):
        bad = hp.negated_field(line_quadratic(line).field)
        prob = VipProblem(bad, hp.whole_manifold(line))
        with pytest.raises(SubproblemFailure):
            hp.solve_subproblem(prob, line.point([1.0]), 1.0, 1e-10, 0.0)


class TestAbsoluteLoop:
    def test_exact_mode_halving_recursion(self, line):
        prob = line_quadratic(line, a=0.0)
        rec = hp.ppm_absolute(
            prob, exact_schedules(), line.point([1.0]), max_iters=40, stop_tol=1e-14
        )
        assert rec.mode == "absolute"
        for k, p in enumerate(rec.iterates):
            assert abs(p.coords[0] - 0.5**k) < 1e-10

    def test_general_recursion_matches_scalar_oracle(self, line):
        a, lam = 0.7, 0.5
        prob = line_quadratic(line, a=a)
        rec = hp.ppm_absolute(
            prob, exact_schedules(lam=lam), line.point([3.0]), max_iters=30,
            stop_tol=1e-13,
        )
        x = 3.0
        for k in range(rec.iterations()):
            x = (lam * x + a) / (1.0 + lam)
            assert abs(rec.iterates[k + 1].coords[0] - x) < 1e-10

    def test_start_at_solution_converges_immediately(self, line):
        prob = line_quadratic(line, a=0.7)
        rec = hp.ppm_absolute(prob, exact_schedules(), line.point([0.7]))
        assert rec.status == "converged"
        assert rec.iterations() == 1
        assert rec.step_dists[0] == 0.0
        assert rec.iterates[-1].coords[0] == 0.7

    def test_summable_inexactness_still_converges(self, line):
        prob = line_quadratic(line, a=0.0)
        sched = Schedules.geometric(lam=1.0, theta0=0.1, decay=0.5)
        rec = hp.ppm_absolute(prob, sched, line.point([1.0]), max_iters=200)
        assert abs(rec.iterates[-1].coords[0]) <= 1e-5
        assert hp.audit_error_criteria(rec, sched) == 0

    def test_requires_theta(self, line):
        prob = line_quadratic(line)
        with pytest.raises(ValueError, match="theta"):
            hp.ppm_absolute(
                prob, Schedules.geometric(sigma0=0.5), line.point([1.0])
            )

    def test_infeasible_start_rejected(self, line):
        prob = VipProblem(
            line_quadratic(line).field, hp.geodesic_ball(line, line.point([0.0]), 1.0)
        )
        with pytest.raises(FeasibilityError, match="starting"):
            hp.ppm_absolute(prob, exact_schedules(), line.point([5.0]))

    def test_iteration_budget(self, line):
        prob = line_quadratic(line, a=0.0)
        rec = hp.ppm_absolute(
            prob, exact_schedules(), line.point([1.0]), max_iters=3, stop_tol=1e-14
        )
        assert rec.status == "max-iters" and rec.iterations() == 3
        empty = hp.ppm_absolute(
            prob, exact_schedules(), line.point([1.0]), max_iters=0
        )
        assert empty.iterations() == 0 and empty.status == "max-iters"
        with pytest.raises(ValueError, match="max_iters"):
            hp.ppm_absolute(prob, exact_schedules(), line.point([1.0]), max_iters=-1)

    def test_failure_leaves_partial_record(self, line):
        bad = VipProblem(
            hp.negated_field(line_quadratic(line).field), hp.whole_manifold(line)
        )
        rec = hp.ppm_absolute(bad, exact_schedules(), line.point([1.0]))
        assert rec.status == "subproblem-failure"
        assert rec.message != ""
        assert rec.iterations() == 0 and len(rec.iterates) == 1


class TestRelativeLoop:
    def test_zero_sigma_matches_exact_absolute(self, line):
        prob = line_quadratic(line, a=0.4)
        p0 = line.point([2.0])
        ra = hp.ppm_absolute(prob, exact_schedules(), p0, max_iters=60, stop_tol=1e-13)
        rr = hp.ppm_relative(prob, exact_schedules(), p0, max_iters=60, stop_tol=1e-13)
        assert rr.mode == "relative"
        assert ra.iterations() == rr.iterations()
        for pa, pr in zip(ra.iterates, rr.iterates):
            assert abs(pa.coords[0] - pr.coords[0]) < 1e-10

    def test_summable_sigma_converges(self, line):
        prob = line_quadratic(line, a=0.0)
        sched = Schedules.geometric(lam=1.0, sigma0=0.5, decay=0.9)
        rec = hp.ppm_relative(prob, sched, line.point([1.0]), max_iters=200)
        assert abs(rec.iterates[-1].coords[0]) <= 1e-5
        assert hp.audit_error_criteria(rec, sched) == 0

    def test_requires_sigma(self, line):
        with pytest.raises(ValueError, match="sigma"):
            hp.ppm_relative(
                line_quadratic(line), Schedules.geometric(theta0=0.5), line.point([1.0])
            )

    def test_relative_acceptance_thrash_guard(self):
        acc = _RelativeAcceptance(0.5, max_thrash=3)
        assert acc(1.0, 10.0)  # within its own target
        assert not acc(6.0, 10.0)  # fails, arms prev_target = 5
        with pytest.raises(LivelockError, match="thrashed"):
            d = 9.0
            for _ in range(10):
                # keeps beating the previous target while missing its own
                acc(0.5 * d + 0.1, d)
                d *= 0.9

    def test_livelock_surfaces_as_stalled(self, line):
        def flaky(p):
            raise LivelockError("synthetic livelock")

        prob = VipProblem(
            FieldOracle(line, flaky, label="flaky"), hp.whole_manifold(line)
        )
        rec = hp.ppm_relative(
            prob, Schedules.geometric(sigma0=0.5), line.point([1.0])
        )
        assert rec.status == "stalled"
        assert "livelock" in rec.message


class TestLimitBehavior:
    def test_limit_invariant_to_prox_parameter(self, line):
        prob = line_quadratic(line, a=0.3)
        p0 = line.point([5.0])
        r1 = hp.ppm_absolute(prob, exact_schedules(lam=1.0), p0)
        r10 = hp.ppm_absolute(prob, exact_schedules(lam=10.0), p0)
        assert r1.status == "converged" and r10.status == "converged"
        assert line.dist(r1.iterates[-1], r10.iterates[-1]) <= 1e-6

    def test_constrained_run_reaches_projection(self):
        E = hp.Euclidean(2)
        b = np.array([3.0, 4.0])
        field = FieldOracle(
            E, lambda p: FieldElement(E.tangent(p, p.coords - b)), strong_modulus=1.0
        )
        prob = VipProblem(
            field, hp.geodesic_ball(E, E.origin(), 1.0), known_solution=E.point(b / 5.0)
        )
        rec = hp.ppm_absolute(prob, exact_schedules(), E.point([0.0, 0.0]))
        assert rec.status == "converged"
        assert E.dist(rec.iterates[-1], prob.known_solution) <= 1e-6


class TestCertificates:
    def test_exact_mode_fejer_inequality(self, line):
        prob = line_quadratic(line, a=0.0)
        sched = exact_schedules()
        rec = hp.ppm_absolute(prob, sched, line.point([1.0]), max_iters=40)
        q = prob.known_solution
        slacks = hp.fejer_certificate_abs(rec, q, sched)
        assert rec.fejer_slacks == slacks  # logged at run time
        d_prev = line.dist(q, rec.iterates[0])
        for k, slack in enumerate(slacks):
            d_next = line.dist(q, rec.iterates[k + 1])
            direct = d_prev**2 - rec.step_dists[k] ** 2 - d_next**2
            assert abs(slack - direct) < 1e-14
            assert slack >= -1e-12
            d_prev = d_next

    def test_stationary_record_slack_is_error_budget(self, line):
        q = line.point([0.3])
        zero = line.zero_tangent(q)
        rec = RunRecord(
            manifold=line,
            mode="absolute",
            iterates=[q, q, q],
            residuals=[zero, zero],
            step_dists=[0.0, 0.0],
            eps_used=[0.0, 0.0],
            elements=[FieldElement(zero)] * 2,
            normals=[zero, zero],
            lambdas=[1.0, 1.0],
        )
        sched = Schedules.geometric(lam=1.0, theta0=0.25, eps0=0.125, decay=0.5)
        assert hp.fejer_certificate_abs(rec, q, sched) == [1.0, 0.5]
        rel = Schedules.geometric(lam=1.0, sigma0=0.25, eps0=0.125, decay=0.5)
        assert hp.fejer_certificate_rel(rec, q, rel) == [0.5, 0.25]

    def test_relative_certificate_on_inexact_run(self, line):
        prob = line_quadratic(line, a=0.0)
        sched = Schedules.geometric(lam=1.0, sigma0=0.5, eps0=0.01, decay=0.9)
        rec = hp.ppm_relative(prob, sched, line.point([1.0]), max_iters=200)
        kbar = hp.fejer_start_index(sched, "relative")
        assert kbar == 1  # sigma_0 = lam/2 exactly, first strict drop at k=1
        assert all(s >= -1e-7 for s in rec.fejer_slacks[kbar:])

    def test_certificates_require_matching_schedule(self, line):
        prob = line_quadratic(line, a=0.0)
        sched = exact_schedules()
        rec = hp.ppm_absolute(prob, sched, line.point([1.0]), max_iters=5)
        only_sigma = Schedules.geometric(sigma0=0.1)
        with pytest.raises(ValueError, match="theta"):
            hp.fejer_certificate_abs(rec, prob.known_solution, only_sigma)
        only_theta = Schedules.geometric(theta0=0.1)
        with pytest.raises(ValueError, match="sigma"):
            hp.fejer_certificate_rel(rec, prob.known_solution, only_theta)

    def test_fejer_start_index(self):
        assert hp.fejer_start_index(Schedules.geometric(theta0=0.5), "absolute") == 1
        assert hp.fejer_start_index(Schedules.geometric(theta0=0.4), "absolute") == 0
        assert hp.fejer_start_index(Schedules.geometric(theta0=0.0), "absolute") == 0
        assert hp.fejer_start_index(Schedules.geometric(sigma0=0.9), "relative") == 6
        with pytest.raises(ValueError, match="no error sequence"):
            hp.fejer_start_index(Schedules.geometric(theta0=0.1), "relative")
        slow = Schedules.geometric(lam=1e-9, theta0=0.6, decay=0.9999)
        with pytest.raises(ValueError, match="never drops"):
            hp.fejer_start_index(slow, "absolute", max_k=10)

    def test_quasi_fejer_check(self, line):
        n = 40
        assert hp.quasi_fejer_check([1.0] * n, [0.0] * n, [0.0] * n)
        assert not hp.quasi_fejer_check(
            list(range(n)), [0.5**k for k in range(n)], [0.5**k for k in range(n)]
        )
        # slowly decaying tail: termwise fine but not numerically settled
        zeta = [1.0 / (k + 1.0) for k in range(100)]
        assert not hp.quasi_fejer_check(zeta, [0.0] * 100, [0.0] * 100)
        settled = [0.5 ** min(k, 30) for k in range(100)]
        assert hp.quasi_fejer_check(settled, [0.0] * 100, [0.0] * 100)

    def test_quasi_fejer_on_logged_run(self, line):
        prob = line_quadratic(line, a=0.0)
        sched = Schedules.geometric(lam=1.0, sigma0=0.5, eps0=0.01, decay=0.9)
        rec = hp.ppm_relative(prob, sched, line.point([1.0]), max_iters=200)
        q = prob.known_solution
        zeta = [line.dist(q, p) ** 2 for p in rec.iterates]
        gamma = [2.0 * sched.sigma.value(k) / sched.lam_min for k in range(len(zeta))]
        beta = [4.0 * sched.eps.value(k) / sched.lam_min for k in range(len(zeta))]
        assert hp.quasi_fejer_check(zeta, gamma, beta)

    def test_quasi_fejer_validation(self):
        with pytest.raises(ValueError, match="empty"):
            hp.quasi_fejer_check([], [], [])
        with pytest.raises(ValueError, match="shorter"):
            hp.quasi_fejer_check([1.0, 1.0, 1.0], [0.0], [0.0, 0.0])
        with pytest.raises(ValueError, match="nonnegative"):
            hp.quasi_fejer_check([1.0, 1.0], [-0.1], [0.0])


class TestDiagnosticsAndAudits:
    def test_converged_run_tails(self, line):
        prob = line_quadratic(line, a=0.25)
        rec = hp.ppm_absolute(prob, exact_schedules(), line.point([4.0]))
        d = hp.diagnostics(rec)
        assert d.status == "converged"
        assert d.dist_to_solution_tail <= 1e-6
        assert d.residual_tail <= 1e-11
        # the terminal step is the converged one; earlier tail entries shrink
        # toward it geometrically but need not clear the stopping tolerance
        assert hp.diagnostics(rec, window=1).step_dist_tail <= rec.stop_tol
        with pytest.raises(ValueError, match="window"):
            hp.diagnostics(rec, window=0)

    def test_stationary_record_tails_are_zero(self, line):
        q = line.point([0.3])
        zero = line.zero_tangent(q)
        rec = RunRecord(
            manifold=line,
            mode="absolute",
            iterates=[q, q],
            residuals=[zero],
            step_dists=[0.0],
            eps_used=[0.0],
            elements=[FieldElement(zero)],
            normals=[zero],
            lambdas=[1.0],
            known_solution=q,
        )
        d = hp.diagnostics(rec)
        assert d.step_dist_tail == 0.0
        assert d.residual_tail == 0.0
        assert d.dist_to_solution_tail == 0.0

    def test_truncated_run_reports_finite_tails(self, line):
        prob = line_quadratic(line, a=0.0)
        rec = hp.ppm_absolute(
            prob, exact_schedules(), line.point([1.0]), max_iters=3, stop_tol=1e-14
        )
        d = hp.diagnostics(rec)
        assert d.status == "max-iters" and d.iterations == 3
        assert np.isfinite(d.step_dist_tail) and d.step_dist_tail > 0.0

    def test_no_known_solution_yields_no_distance(self, line):
        prob = VipProblem(line_quadratic(line).field, hp.whole_manifold(line))
        rec = hp.ppm_absolute(prob, exact_schedules(), line.point([1.0]), max_iters=5)
        assert hp.diagnostics(rec).dist_to_solution_tail is None
        assert rec.fejer_slacks == []

    def test_audit_inclusion_and_criteria(self, line):
        prob = line_quadratic(line, a=0.0)
        sched = Schedules.geometric(lam=1.0, theta0=0.1, decay=0.5)
        rec = hp.ppm_absolute(prob, sched, line.point([1.0]), max_iters=50)
        assert hp.audit_inclusion(rec) <= 1e-12
        assert hp.audit_error_criteria(rec, sched) == 0

    def test_audits_on_curved_run(self, hyperboloid2):
        a = hyperboloid2.point([np.cosh(0.9), np.sinh(0.9), 0.0])
        field = FieldOracle(
            hyperboloid2,
            lambda p: FieldElement((-1.0) * hyperboloid2.log(p, a)),
            strong_modulus=1.0,
        )
        prob = VipProblem(field, hp.whole_manifold(hyperboloid2), known_solution=a)
        sched = Schedules.geometric(lam=1.0, sigma0=0.5, decay=0.9)
        rec = hp.ppm_relative(prob, sched, hyperboloid2.origin())
        assert rec.status == "converged"
        assert hyperboloid2.dist(rec.iterates[-1], a) <= 1e-6
        assert hp.audit_inclusion(rec) <= 1e-12
        assert hp.audit_error_criteria(rec, sched) == 0
        kbar = hp.fejer_start_index(sched, "relative")
        assert all(s >= -1e-7 for s in rec.fejer_slacks[kbar:])

    def test_audit_flags_tampered_record(self, line):
        prob = line_quadratic(line, a=0.0)
        sched = Schedules.geometric(lam=1.0, theta0=0.1, decay=0.5)
        rec = hp.ppm_absolute(prob, sched, line.point([1.0]), max_iters=20)
        rec.residuals[0] = line.tangent(rec.iterates[1], [5.0])
        assert hp.audit_inclusion(rec) > 1.0
        assert hp.audit_error_criteria(rec, sched) >= 1

    def test_record_validate(self, line):
        prob = line_quadratic(line, a=0.0)
        rec = hp.ppm_absolute(prob, exact_schedules(), line.point([1.0]), max_iters=10)
        rec.validate()
        broken = hp.ppm_absolute(prob, exact_schedules(), line.point([1.0]), max_iters=10)
        broken.step_dists[2] += 0.5
        with pytest.raises(ValueError, match="does not recompute"):
            broken.validate()
        short = hp.ppm_absolute(prob, exact_schedules(), line.point([1.0]), max_iters=10)
        short.residuals.pop()
        with pytest.raises(ValueError, match="inconsistent"):
            short.validate()
        weird = hp.ppm_absolute(prob, exact_schedules(), line.point([1.0]), max_iters=10)
        weird.status = "confused"
        with pytest.raises(ValueError, match="unknown status"):
            weird.validate()


@pytest.fixture(scope="module")
def run(line):
    prob = line_quadratic(line, a=0.0)
    sched = Schedules.geometric(lam=1.0, theta0=0.05, decay=0.5)
    return hp.ppm_absolute(prob, sched, line.point([1.0]), max_iters=30)


class TestSerialization:
    def test_csv_header_and_rows(self, run):
        header = hp.run_csv_header(run)
        assert header == ["k", "p_coords_0", "e_norm", "step_dist", "eps_k", "fejer_slack"]
        rows = hp.run_csv_rows(run)
        assert len(rows) == len(run.iterates)
        assert rows[0][2:] == ["", "", "", ""]
        # repr round-trips every float exactly
        assert float(rows[1][1]) == run.iterates[1].coords[0]
        assert float(rows[1][3]) == run.step_dists[0]
        assert float(rows[1][5]) == run.fejer_slacks[0]

    def test_write_run_csv(self, run, tmp_path):
        path = tmp_path / "run.csv"
        hp.write_run_csv(run, path)
        text = path.read_text()
        assert "\r" not in text and text.endswith("\n")
        lines = text.splitlines()
        assert len(lines) == len(run.iterates) + 1
        assert lines[0].startswith("k,p_coords_0")

    def test_payload_roundtrip(self, run):
        payload = hp.run_record_payload(run)
        assert payload["manifold_id"] == "euclidean:1"
        assert payload["mode"] == "absolute"
        assert payload["status"] == run.status
        assert payload["iterations"] == run.iterations()
        assert payload["iterates"][0] == [1.0]
        assert payload["residual_norms"] == [float(v) for v in run.residual_norms()]
        assert payload["known_solution"] == [0.0]
        assert len(payload["fejer_slacks"]) == run.iterations()

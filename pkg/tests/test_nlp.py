import io

import numpy as np
import pytest

from auvpilot import nlp

RNG = np.random.default_rng(11)


def quadratic_problem():
    """min ||z||^2  s.t.  z1 + z2 = 1."""
    def obj(z):
        return float(z @ z), 2.0 * z

    def eq(z):
        return np.array([z[0] + z[1] - 1.0]), np.array([[1.0, 1.0]])

    return nlp.NlpProblem(n=2, objective=obj, m_eq=1, eq_constraints=eq)


def box_problem():
    """min (z1-1)^2 + (z2-2)^2  s.t.  z in [0, 1.5]^2."""
    def obj(z):
        d = z - np.array([1.0, 2.0])
        return float(d @ d), 2.0 * d

    return nlp.NlpProblem(n=2, objective=obj, lower=[0.0, 0.0], upper=[1.5, 1.5])


class TestSolve:
    def test_symmetric_projection(self):
        rep = nlp.solve(quadratic_problem(), x0=np.array([3.0, -2.0]))
        assert rep.converged
        np.testing.assert_allclose(rep.z, [0.5, 0.5], atol=1e-6)
        assert rep.max_violation <= 1e-6

    def test_clipped_unconstrained_optimum(self):
        rep = nlp.solve(box_problem(), x0=np.array([0.2, 0.2]))
        assert rep.converged
        np.testing.assert_allclose(rep.z, [1.0, 1.5], atol=1e-6)

    def test_rosenbrock_on_circle_vs_grid_oracle(self):
        # Oracle: dense 1-D grid search over the circle parameterization.
        def rosen(x, y):
            return (1.0 - x) ** 2 + 100.0 * (y - x * x) ** 2

        thetas = np.linspace(0.0, 2.0 * np.pi, 2_000_001)
        vals = rosen(np.cos(thetas), np.sin(thetas))
        tstar = thetas[np.argmin(vals)]
        z_oracle = np.array([np.cos(tstar), np.sin(tstar)])

        def obj(z):
            x, y = z
            g = np.array([-2.0 * (1.0 - x) - 400.0 * x * (y - x * x),
                          200.0 * (y - x * x)])
            return rosen(x, y), g

        def eq(z):
            return np.array([z @ z - 1.0]), 2.0 * z[None, :]

        prob = nlp.NlpProblem(n=2, objective=obj, m_eq=1, eq_constraints=eq)
        rep = nlp.solve(prob, x0=np.array([1.0, 0.5]))
        assert rep.converged
        np.testing.assert_allclose(rep.z, z_oracle, atol=1e-4)

    def test_inequality_active(self):
        # min (z-2)^2 s.t. z <= 1  ->  z = 1.
        def obj(z):
            return float((z[0] - 2.0) ** 2), np.array([2.0 * (z[0] - 2.0)])

        def ineq(z):
            return np.array([z[0] - 1.0]), np.array([[1.0]])

        rep = nlp.solve(nlp.NlpProblem(n=1, objective=obj, m_ineq=1,
                                       ineq_constraints=ineq),
                        x0=np.array([0.0]),
                        options=nlp.SolveOptions(optimality_tol=1e-8))
        assert rep.converged
        np.testing.assert_allclose(rep.z, [1.0], atol=1e-6)

    def test_kkt_closed_form_qp(self):
        # Random convex QP with linear equalities: compare against the KKT system.
        n, m = 6, 2
        A = RNG.standard_normal((n, n))
        H = A @ A.T + n * np.eye(n)
        g = RNG.standard_normal(n)
        C = RNG.standard_normal((m, n))
        d = RNG.standard_normal(m)

        kkt = np.block([[H, C.T], [C, np.zeros((m, m))]])
        sol = np.linalg.solve(kkt, np.concatenate([-g, d]))
        z_star = sol[:n]

        def obj(z):
            return float(0.5 * z @ H @ z + g @ z), H @ z + g

        def eq(z):
            return C @ z - d, C

        prob = nlp.NlpProblem(n=n, objective=obj, m_eq=m, eq_constraints=eq)
        rep = nlp.solve(prob, x0=np.zeros(n))
        assert rep.converged
        np.testing.assert_allclose(rep.z, z_star, atol=1e-6)

    def test_reported_violation_reproducible(self):
        prob = quadratic_problem()
        rep = nlp.solve(prob, x0=np.array([5.0, 5.0]))
        assert rep.max_violation == prob.violation(rep.z)

    def test_deterministic_bitwise(self):
        prob = quadratic_problem()
        r1 = nlp.solve(prob, x0=np.array([3.0, -2.0]))
        r2 = nlp.solve(prob, x0=np.array([3.0, -2.0]))
        assert r1.objective == r2.objective
        assert r1.max_violation == r2.max_violation
        np.testing.assert_array_equal(r1.z, r2.z)
        assert r1.iterations == r2.iterations

    def test_infeasible_stall_status(self):
        # z in [0, 1] but z = 3 required: infeasible by constraint.
        def obj(z):
            return float(z @ z), 2.0 * z

        def eq(z):
            return np.array([z[0] - 3.0]), np.array([[1.0]])

        prob = nlp.NlpProblem(n=1, objective=obj, m_eq=1, eq_constraints=eq,
                              lower=[0.0], upper=[1.0])
        rep = nlp.solve(prob, x0=np.array([0.5]))
        assert not rep.converged
        assert rep.status in ("infeasible-stall", "iteration-limit")

    def test_callback_failure_aborts(self):
        def obj(z):
            return float("nan"), np.zeros(2)

        prob = nlp.NlpProblem(n=2, objective=obj)
        with pytest.raises(nlp.CallbackError):
            nlp.solve(prob, x0=np.zeros(2))

    def test_iteration_log_stream(self):
        stream = io.StringIO()
        nlp.solve(quadratic_problem(), x0=np.array([3.0, -2.0]),
                  options=nlp.SolveOptions(log_stream=stream))
        lines = stream.getvalue().strip().splitlines()
        assert len(lines) >= 1
        assert len(lines[0].split()) == 5  # outer, inner, objective, violation, step


class TestCheckGradients:
    def test_quadratic_exact(self):
        prob = quadratic_problem()
        assert nlp.check_gradients(prob, np.array([0.3, -0.7])) < 1e-8

    def test_corrupted_jacobian_detected(self):
        def obj(z):
            return float(z @ z), 2.0 * z

        def eq(z):
            return np.array([z[0] + z[1] - 1.0]), np.array([[1.0, 2.0]])  # wrong entry

        prob = nlp.NlpProblem(n=2, objective=obj, m_eq=1, eq_constraints=eq)
        assert nlp.check_gradients(prob, np.array([0.3, -0.7])) > 1e-2

    def test_nonlinear_constraint(self):
        def obj(z):
            return float(np.sin(z[0]) + z[1] ** 3), np.array([np.cos(z[0]), 3 * z[1] ** 2])

        def ineq(z):
            return np.array([np.exp(z[0]) - 2.0]), np.array([[np.exp(z[0]), 0.0]])

        prob = nlp.NlpProblem(n=2, objective=obj, m_ineq=1, ineq_constraints=ineq)
        assert nlp.check_gradients(prob, np.array([0.4, 0.9])) < 1e-8


class TestProblemValidation:
    def test_bound_ordering(self):
        with pytest.raises(ValueError, match="bound"):
            nlp.NlpProblem(n=1, objective=lambda z: (0.0, np.zeros(1)),
                           lower=[1.0], upper=[0.0])

    def test_dimension_mismatch(self):
        def obj(z):
            return 0.0, np.zeros(2)

        def eq(z):
            return np.zeros(3), np.zeros((3, 2))  # declared m_eq=2 below

        prob = nlp.NlpProblem(n=2, objective=obj, m_eq=2, eq_constraints=eq)
        with pytest.raises(ValueError):
            prob.eval_eq(np.zeros(2))

"""Smooth constrained nonlinear programming by the augmented Lagrangian method.

Solves

    min f(z)   s.t.  c_eq(z) = 0,  c_ineq(z) <= 0,  lb <= z <= ub

with a safeguarded augmented-Lagrangian outer loop (Conn-Gould-Toint style
penalty/tolerance updates, squared-hinge terms for the inequalities) and a
bound-constrained limited-memory quasi-Newton inner minimization (scipy
L-BFGS-B).  The method is deterministic: identical problems and options
produce identical reports.

The callback protocol returns values together with derivatives:
``objective(z) -> (float, grad)``, ``eq/ineq(z) -> (values, jacobian)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
import scipy.optimize

__all__ = [
    "CallbackError",
    "NlpProblem",
    "SolveOptions",
    "SolveReport",
    "solve",
    "check_gradients",
]


class CallbackError(RuntimeError):
    """A problem callback returned a non-finite value."""


@dataclass
class NlpProblem:
    """Problem data for :func:`solve`.

    Parameters
    ----------
    n : int
        Decision-vector dimension.
    objective : callable
        ``z -> (value, gradient)``.
    eq_constraints, ineq_constraints : callable or None
        ``z -> (values, jacobian)`` with declared row counts ``m_eq`` /
        ``m_ineq``; inequalities use the ``c(z) <= 0`` convention.
    lower, upper : array_like or None
        Box bounds (None means unbounded on that side).
    """

    n: int
    objective: Callable[[np.ndarray], tuple]
    m_eq: int = 0
    m_ineq: int = 0
    eq_constraints: Optional[Callable[[np.ndarray], tuple]] = None
    ineq_constraints: Optional[Callable[[np.ndarray], tuple]] = None
    lower: Optional[np.ndarray] = None
    upper: Optional[np.ndarray] = None

    def __post_init__(self):
        self.lower = (np.full(self.n, -np.inf) if self.lower is None
                      else np.asarray(self.lower, dtype=float).reshape(self.n))
        self.upper = (np.full(self.n, np.inf) if self.upper is None
                      else np.asarray(self.upper, dtype=float).reshape(self.n))
        if np.any(self.lower > self.upper):
            raise ValueError("lower bound exceeds upper bound")
        if self.m_eq and self.eq_constraints is None:
            raise ValueError("m_eq > 0 but no equality callback")
        if self.m_ineq and self.ineq_constraints is None:
            raise ValueError("m_ineq > 0 but no inequality callback")

    def eval_objective(self, z):
        val, grad = self.objective(z)
        grad = np.asarray(grad, dtype=float).reshape(self.n)
        if not np.isfinite(val) or not np.all(np.isfinite(grad)):
            raise CallbackError("objective returned non-finite values")
        return float(val), grad

    def eval_eq(self, z):
        if self.eq_constraints is None:
            return np.zeros(0), np.zeros((0, self.n))
        c, J = self.eq_constraints(z)
        c = np.asarray(c, dtype=float).reshape(self.m_eq)
        J = np.asarray(J, dtype=float).reshape(self.m_eq, self.n)
        if not (np.all(np.isfinite(c)) and np.all(np.isfinite(J))):
            raise CallbackError("equality constraints returned non-finite values")
        return c, J

    def eval_ineq(self, z):
        if self.ineq_constraints is None:
            return np.zeros(0), np.zeros((0, self.n))
        c, J = self.ineq_constraints(z)
        c = np.asarray(c, dtype=float).reshape(self.m_ineq)
        J = np.asarray(J, dtype=float).reshape(self.m_ineq, self.n)
        if not (np.all(np.isfinite(c)) and np.all(np.isfinite(J))):
            raise CallbackError("inequality constraints returned non-finite values")
        return c, J

    def violation(self, z) -> float:
        """Max constraint violation at z (bounds excluded; they always hold)."""
        c_eq, _ = self.eval_eq(z)
        c_in, _ = self.eval_ineq(z)
        v = 0.0
        if c_eq.size:
            v = max(v, float(np.max(np.abs(c_eq))))
        if c_in.size:
            v = max(v, float(np.max(np.maximum(c_in, 0.0))))
        return v


@dataclass
class SolveOptions:
    feasibility_tol: float = 1e-6
    optimality_tol: float = 1e-5
    max_outer: int = 50
    max_inner: int = 500
    initial_penalty: float = 10.0
    penalty_growth: float = 10.0
    max_penalty: float = 1e12
    stall_outer: int = 4          # outers without violation progress => infeasible-stall
    stall_ratio: float = 0.75     # required per-window violation decrease
    log_stream: object = None     # file-like; line-oriented iteration log


@dataclass
class SolveReport:
    z: np.ndarray
    objective: float
    max_violation: float
    iterations: int               # cumulative inner iterations
    outer_iterations: int
    status: str                   # converged | iteration-limit | infeasible-stall
    message: str = ""

    @property
    def converged(self) -> bool:
        return self.status == "converged"


def _augmented(problem: NlpProblem, z, lam, mu, rho):
    """Augmented Lagrangian value and gradient at z."""
    f, g = problem.eval_objective(z)
    val = f
    grad = g
    if problem.m_eq:
        c, J = problem.eval_eq(z)
        val += lam @ c + 0.5 * rho * (c @ c)
        grad = grad + J.T @ (lam + rho * c)
    if problem.m_ineq:
        c, J = problem.eval_ineq(z)
        t = np.maximum(0.0, mu + rho * c)
        val += (t @ t - mu @ mu) / (2.0 * rho)
        grad = grad + J.T @ t
    return val, grad


def _lagrangian_grad(problem: NlpProblem, z, lam, mu):
    """Gradient of the plain Lagrangian (multipliers fixed)."""
    _, g = problem.eval_objective(z)
    if problem.m_eq:
        _, J = problem.eval_eq(z)
        g = g + J.T @ lam
    if problem.m_ineq:
        _, J = problem.eval_ineq(z)
        g = g + J.T @ mu
    return g


def _kkt_residual(problem: NlpProblem, z, active_tol=1e-6):
    """Projected stationarity and complementarity with least-squares multipliers.

    The first-order multiplier estimates of the augmented Lagrangian carry
    O(rho * eps) noise at large penalties, so the termination test refits the
    multipliers by least squares over the free coordinates (active
    inequalities only, negative inequality multipliers clamped to zero).
    """
    _, g = problem.eval_objective(z)
    c_eq, J_eq = problem.eval_eq(z)
    c_in, J_in = problem.eval_ineq(z)
    active = np.flatnonzero(c_in >= -active_tol)
    free = (z > problem.lower + 1e-12) & (z < problem.upper - 1e-12)

    mats = []
    if problem.m_eq:
        mats.append(J_eq[:, free])
    if active.size:
        mats.append(J_in[active][:, free])
    if mats:
        A = np.vstack(mats).T                      # (n_free, m_eq + m_act)
        mult, *_ = np.linalg.lstsq(A, -g[free], rcond=None)
        lam = mult[:problem.m_eq]
        mu_act = np.maximum(mult[problem.m_eq:], 0.0)
    else:
        lam = np.zeros(0)
        mu_act = np.zeros(0)
    mu = np.zeros(problem.m_ineq)
    mu[active] = mu_act

    g_lag = _lagrangian_grad(problem, z, lam, mu)
    proj = np.clip(z - g_lag, problem.lower, problem.upper) - z
    # Stationarity is scaled by the objective-gradient magnitude so the
    # measure is invariant to the problem's overall scaling.
    scale = max(1.0, float(np.max(np.abs(g))))
    stat = (float(np.max(np.abs(proj))) / scale) if proj.size else 0.0
    comp = (float(np.max(np.minimum(mu, np.maximum(-c_in, 0.0)))) / scale
            if problem.m_ineq else 0.0)
    return stat, comp


def solve(problem: NlpProblem, options: SolveOptions | None = None,
          x0: np.ndarray | None = None) -> SolveReport:
    """Minimize the problem from ``x0`` (clipped into the box).

    Returns the best iterate with a termination status; a ``converged``
    report guarantees max violation <= feasibility_tol and first-order
    stationarity of the Lagrangian <= optimality_tol (projected onto the
    box).
    """
    opts = options or SolveOptions()
    z = np.zeros(problem.n) if x0 is None else np.asarray(x0, dtype=float).reshape(problem.n)
    z = np.clip(z, problem.lower, problem.upper)

    # A feasible start that already satisfies the KKT conditions (e.g.
    # re-solving from a converged solution) returns without iterating.
    viol0 = problem.violation(z)
    if viol0 <= opts.feasibility_tol:
        stat0, comp0 = _kkt_residual(problem, z)
        if stat0 <= opts.optimality_tol and comp0 <= opts.optimality_tol:
            fval0, _ = problem.eval_objective(z)
            return SolveReport(z=z, objective=fval0, max_violation=viol0,
                               iterations=0, outer_iterations=0,
                               status="converged")

    lam = np.zeros(problem.m_eq)
    mu = np.zeros(problem.m_ineq)
    rho = opts.initial_penalty
    # Classic safeguarded tolerance schedule.
    eta = 1.0 / rho ** 0.1
    omega = 1.0 / rho

    bounds = list(zip(
        [None if not np.isfinite(b) else b for b in problem.lower],
        [None if not np.isfinite(b) else b for b in problem.upper],
    ))

    total_inner = 0
    best = None
    recent_viol = []

    for outer in range(1, opts.max_outer + 1):
        z_prev = z
        res = scipy.optimize.minimize(
            lambda zz: _augmented(problem, zz, lam, mu, rho),
            z, jac=True, method="L-BFGS-B", bounds=bounds,
            options={"maxiter": opts.max_inner,
                     "ftol": 1e-16,
                     "gtol": float(np.clip(omega, 1e-9, 1e-2)),
                     "maxcor": 30})
        z = np.clip(res.x, problem.lower, problem.upper)
        total_inner += int(res.nit)

        c_eq, _ = problem.eval_eq(z)
        c_in, _ = problem.eval_ineq(z)
        viol = problem.violation(z)
        fval, _ = problem.eval_objective(z)

        if opts.log_stream is not None:
            step = float(np.linalg.norm(z - z_prev))
            opts.log_stream.write(
                f"{outer:4d} {total_inner:7d} {fval: .9e} {viol: .3e} {step: .3e}\n")

        if best is None or (viol, fval) < (best[0], best[1]):
            best = (viol, fval, z.copy())

        lam_hat = lam + rho * c_eq
        mu_hat = np.maximum(0.0, mu + rho * c_in) if problem.m_ineq else mu

        # Termination test: feasibility plus projected stationarity and
        # complementarity with least-squares multipliers (only worth
        # computing once feasible).
        if viol <= opts.feasibility_tol:
            stat, comp = _kkt_residual(problem, z)
            if stat <= opts.optimality_tol and comp <= opts.optimality_tol:
                return SolveReport(z=z, objective=fval, max_violation=viol,
                                   iterations=total_inner, outer_iterations=outer,
                                   status="converged")

        recent_viol.append(viol)
        if len(recent_viol) > opts.stall_outer:
            recent_viol.pop(0)
            if (rho >= opts.max_penalty
                    and viol > opts.feasibility_tol
                    and viol > opts.stall_ratio * recent_viol[0]):
                vb, fb, zb = best
                return SolveReport(
                    z=zb, objective=fb, max_violation=vb,
                    iterations=total_inner, outer_iterations=outer,
                    status="infeasible-stall",
                    message="constraint violation stalled at maximum penalty")

        if viol <= eta:
            lam = lam_hat
            mu = mu_hat
            eta = max(eta / rho ** 0.9, 0.1 * opts.feasibility_tol)
            omega = max(omega / rho, 1e-9)
        else:
            rho = min(rho * opts.penalty_growth, opts.max_penalty)
            eta = max(1.0 / rho ** 0.1, 0.1 * opts.feasibility_tol)
            omega = max(1.0 / rho, 1e-9)

    vb, fb, zb = best
    return SolveReport(z=zb, objective=fb, max_violation=vb,
                       iterations=total_inner, outer_iterations=opts.max_outer,
                       status="iteration-limit",
                       message="outer iteration limit reached")


def check_gradients(problem: NlpProblem, point: np.ndarray, step: float = 1e-6) -> float:
    """Max relative discrepancy between callback derivatives and central differences.

    The comparison step is scaled per coordinate (``step * max(1, |z_i|)``);
    the discrepancy for an entry pair (a, d) is |a - d| / max(1, |a|, |d|).
    """
    z = np.asarray(point, dtype=float).reshape(problem.n)
    _, grad = problem.eval_objective(z)
    c_eq, J_eq = problem.eval_eq(z)
    c_in, J_in = problem.eval_ineq(z)

    fd_grad = np.zeros_like(grad)
    fd_Jeq = np.zeros_like(J_eq)
    fd_Jin = np.zeros_like(J_in)
    for i in range(problem.n):
        h = step * max(1.0, abs(z[i]))
        zp, zm = z.copy(), z.copy()
        zp[i] += h
        zm[i] -= h
        fp, _ = problem.eval_objective(zp)
        fm, _ = problem.eval_objective(zm)
        fd_grad[i] = (fp - fm) / (2.0 * h)
        if problem.m_eq:
            cp, _ = problem.eval_eq(zp)
            cm, _ = problem.eval_eq(zm)
            fd_Jeq[:, i] = (cp - cm) / (2.0 * h)
        if problem.m_ineq:
            cp, _ = problem.eval_ineq(zp)
            cm, _ = problem.eval_ineq(zm)
            fd_Jin[:, i] = (cp - cm) / (2.0 * h)

    def rel(a, d):
        if a.size == 0:
            return 0.0
        denom = np.maximum(1.0, np.maximum(np.abs(a), np.abs(d)))
        return float(np.max(np.abs(a - d) / denom))

    return max(rel(grad, fd_grad), rel(J_eq, fd_Jeq), rel(J_in, fd_Jin))

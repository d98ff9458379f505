"""Direct transcription of the maneuver optimization over knot points.

Decision variables are the knot states X = {x_0 .. x_{T+1}}, the knot inputs
U = {u_0 .. u_T} and one shared time step h (total duration D = T*h).  The
discrete dynamics are backward Euler with the derivative evaluated at the
destination knot,

    x_{t+1} = x_t + h * xdot(x_{t+1}, u_{t+1})        t = 0..T-1
    x_{T+1} = x_T + h * xdot(x_{T+1}, u_T)            trailing knot

so no implicit solve is needed: the destination knot is itself a decision
variable.  The cost is the running position error to the goal plus quadratic
input effort plus squared duration.  Thrust and thruster angle/rate limits
are box bounds; the quaternion norm keeps the relaxed two-sided band
[0.999, 1.001] at every knot; boundary states are pinned through equal
lower/upper bounds and endpoint accelerations through dynamics-consistency
equalities.

Constraint Jacobians are assembled from batched central finite differences
of the vehicle dynamics (block structure: each defect row couples only two
neighboring knots, one input and h).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import nlp
from .quatmath import quat_normalize, quat_slerp
from .vehicle import (
    NU,
    NV,
    NX,
    NS,
    VehicleParams,
    state_derivative,
    state_derivative_batch,
)

__all__ = [
    "TranscriptionSpec",
    "Trajectory",
    "TranscriptionLayout",
    "ViolationReport",
    "build_transcription",
    "initial_guess",
    "solve_trajectory",
    "validate_trajectory",
    "save_trajectory",
    "load_trajectory",
]

QUAT_NORM_LO = 0.999
QUAT_NORM_HI = 1.001

_FD_STEP = 1e-6

STATE_COLUMNS = [
    ("q_w", "-"), ("q_x", "-"), ("q_y", "-"), ("q_z", "-"),
    ("x", "m"), ("y", "m"), ("z", "m"),
    ("psi", "rad"), ("phi", "rad"),
    ("w_x", "rad/s"), ("w_y", "rad/s"), ("w_z", "rad/s"),
    ("vx", "m/s"), ("vy", "m/s"), ("vz", "m/s"),
    ("psid", "rad/s"), ("phid", "rad/s"),
]
INPUT_COLUMNS = [("f", "N"), ("tau_psi", "N*m"), ("tau_phi", "N*m")]


@dataclass
class TranscriptionSpec:
    """Boundary states, limits and weights of one maneuver optimization.

    ``s_final_mask`` / ``v_final_mask`` select which components of the final
    boundary are pinned (all by default).  ``hold_attitude_knots`` pins the
    attitude of that many trailing knots (including the extra knot x_{T+1})
    to the final quaternion, which realizes hold segments.  ``monotone_z``
    adds z_{t+1} - z_t >= monotone_z_min_step at every knot pair.
    """

    knots: int                                  # T
    h_bounds: tuple[float, float]               # s
    s_init: np.ndarray                          # (9,)
    v_init: np.ndarray                          # (8,)
    s_final: np.ndarray                         # (9,)
    v_final: np.ndarray                         # (8,)
    vdot_init: Optional[np.ndarray] = None      # (8,) or None
    vdot_final: Optional[np.ndarray] = None
    s_final_mask: Optional[np.ndarray] = None   # (9,) bool
    v_final_mask: Optional[np.ndarray] = None   # (8,) bool
    w_position: float = 1.0
    w_input: float = 0.01
    w_duration: float = 0.1
    force_limits: Optional[tuple[float, float]] = None   # override of params
    hold_attitude_knots: int = 0
    monotone_z: bool = False
    monotone_z_min_step: float = 1e-4
    lateral_bound: Optional[float] = None       # m, verified post-hoc

    def __post_init__(self):
        self.s_init = np.asarray(self.s_init, dtype=float).reshape(NS)
        self.v_init = np.asarray(self.v_init, dtype=float).reshape(NV)
        self.s_final = np.asarray(self.s_final, dtype=float).reshape(NS)
        self.v_final = np.asarray(self.v_final, dtype=float).reshape(NV)
        if self.vdot_init is not None:
            self.vdot_init = np.asarray(self.vdot_init, dtype=float).reshape(NV)
        if self.vdot_final is not None:
            self.vdot_final = np.asarray(self.vdot_final, dtype=float).reshape(NV)
        self.s_final_mask = (np.ones(NS, dtype=bool) if self.s_final_mask is None
                             else np.asarray(self.s_final_mask, dtype=bool).reshape(NS))
        self.v_final_mask = (np.ones(NV, dtype=bool) if self.v_final_mask is None
                             else np.asarray(self.v_final_mask, dtype=bool).reshape(NV))
        self.validate()

    def validate(self):
        if self.knots < 2:
            raise ValueError("need at least 2 knots")
        lo, hi = self.h_bounds
        if not (0.0 < lo <= hi):
            raise ValueError("h bounds must satisfy 0 < h_min <= h_max")
        for q in (self.s_init[0:4], self.s_final[0:4]):
            if abs(np.linalg.norm(q) - 1.0) > 1e-9:
                raise ValueError("boundary quaternions must have unit norm")
        if self.force_limits is not None:
            fl, fu = self.force_limits
            if not (fl < 0.0 < fu):
                raise ValueError("force limit override must straddle zero")
        if self.hold_attitude_knots < 0 or self.hold_attitude_knots > self.knots:
            raise ValueError("hold_attitude_knots out of range")


@dataclass(frozen=True)
class Trajectory:
    """Optimized knot sequence with its shared time step."""

    states: np.ndarray   # (T+2, 17)
    inputs: np.ndarray   # (T+1, 3)
    h: float             # s

    def __post_init__(self):
        object.__setattr__(self, "states", np.asarray(self.states, dtype=float))
        object.__setattr__(self, "inputs", np.asarray(self.inputs, dtype=float))
        if self.states.ndim != 2 or self.states.shape[1] != NX:
            raise ValueError("states must be (T+2, 17)")
        if self.inputs.shape != (self.states.shape[0] - 1, NU):
            raise ValueError("inputs must be (T+1, 3)")

    @property
    def knot_count(self) -> int:
        """T: the index of the final boundary knot."""
        return self.states.shape[0] - 2

    @property
    def duration(self) -> float:
        return self.knot_count * self.h

    @property
    def knot_times(self) -> np.ndarray:
        return self.h * np.arange(self.states.shape[0])

    def interp_state(self, t: float) -> np.ndarray:
        """Reference state at time t in [0, D]: linear in s/v, slerp attitude.

        Clamps to the boundary knots outside the horizon (the trailing
        knot x_{T+1} is a transcription artifact and is not interpolated).
        """
        T = self.knot_count
        tau = np.clip(t / self.h, 0.0, float(T))
        k = min(int(tau), T - 1)
        a = tau - k
        x = (1.0 - a) * self.states[k] + a * self.states[k + 1]
        x[0:4] = quat_slerp(quat_normalize(self.states[k, 0:4]),
                            quat_normalize(self.states[k + 1, 0:4]), a)
        return x

    def interp_input(self, t: float) -> np.ndarray:
        """Reference input at time t: hold of the destination-knot input.

        Matches the backward-Euler rule (u_{t+1} acts over (t, t+1]).
        """
        T = self.knot_count
        k = int(np.ceil(t / self.h - 1e-12))
        return self.inputs[int(np.clip(k, 0, T))].copy()


class TranscriptionLayout:
    """Packing of {X, U, h} into one decision vector (inputs scaled)."""

    def __init__(self, T: int, u_scale: float):
        self.T = T
        self.u_scale = float(u_scale)
        self.n_states = T + 2
        self.n_inputs = T + 1
        self.off_u = NX * self.n_states
        self.n = self.off_u + NU * self.n_inputs + 1

    def x_slice(self, t: int) -> slice:
        return slice(NX * t, NX * (t + 1))

    def u_slice(self, k: int) -> slice:
        return slice(self.off_u + NU * k, self.off_u + NU * (k + 1))

    @property
    def h_index(self) -> int:
        return self.n - 1

    def pack(self, states: np.ndarray, inputs: np.ndarray, h: float) -> np.ndarray:
        z = np.empty(self.n)
        z[:self.off_u] = np.asarray(states, dtype=float).reshape(-1)
        z[self.off_u:-1] = np.asarray(inputs, dtype=float).reshape(-1) / self.u_scale
        z[-1] = h
        return z

    def unpack(self, z: np.ndarray):
        states = z[:self.off_u].reshape(self.n_states, NX).copy()
        inputs = z[self.off_u:-1].reshape(self.n_inputs, NU) * self.u_scale
        return states, inputs, float(z[-1])


def _force_limits(spec: TranscriptionSpec, params: VehicleParams):
    if spec.force_limits is not None:
        return spec.force_limits
    return params.force_min, params.force_max


def build_transcription(spec: TranscriptionSpec, params: VehicleParams):
    """Assemble the NLP for one maneuver.

    Returns
    -------
    (problem, layout) : (nlp.NlpProblem, TranscriptionLayout)
    """
    T = spec.knots
    f_lo, f_hi = _force_limits(spec, params)
    u_scale = max(abs(f_lo), abs(f_hi))
    lay = TranscriptionLayout(T, u_scale)
    n = lay.n

    # Boundary states within the box limits.
    for val, (lo, hi), what in (
        (spec.s_init[7], params.psi_limits, "initial psi"),
        (spec.s_init[8], params.phi_limits, "initial phi"),
        (spec.v_init[6], params.psi_rate_limits, "initial psi rate"),
        (spec.v_init[7], params.phi_rate_limits, "initial phi rate"),
    ):
        if not (lo <= val <= hi):
            raise ValueError(f"{what} violates the vehicle limits")
    if spec.s_final_mask[7] and not (params.psi_limits[0] <= spec.s_final[7] <= params.psi_limits[1]):
        raise ValueError("final psi violates the vehicle limits")
    if spec.s_final_mask[8] and not (params.phi_limits[0] <= spec.s_final[8] <= params.phi_limits[1]):
        raise ValueError("final phi violates the vehicle limits")

    # ---------------- bounds ----------------
    lower = np.full(n, -np.inf)
    upper = np.full(n, np.inf)
    for t in range(lay.n_states):
        sl = lay.x_slice(t)
        lower[sl.start:sl.start + 4] = -QUAT_NORM_HI
        upper[sl.start:sl.start + 4] = QUAT_NORM_HI
        lower[sl.start + 7], upper[sl.start + 7] = params.psi_limits
        lower[sl.start + 8], upper[sl.start + 8] = params.phi_limits
        lower[sl.start + 15], upper[sl.start + 15] = params.psi_rate_limits
        lower[sl.start + 16], upper[sl.start + 16] = params.phi_rate_limits
    for k in range(lay.n_inputs):
        sl = lay.u_slice(k)
        lower[sl.start] = f_lo / u_scale
        upper[sl.start] = f_hi / u_scale
    lower[lay.h_index], upper[lay.h_index] = spec.h_bounds

    # Pin the initial knot and the masked final components.
    x0 = np.concatenate([spec.s_init, spec.v_init])
    sl0 = lay.x_slice(0)
    lower[sl0] = upper[sl0] = x0
    slT = lay.x_slice(T)
    xT = np.concatenate([spec.s_final, spec.v_final])
    mask = np.concatenate([spec.s_final_mask, spec.v_final_mask])
    idx = np.flatnonzero(mask) + slT.start
    lower[idx] = upper[idx] = xT[mask]

    # ---------------- equality constraints ----------------
    # Defects t=0..T, then optional endpoint accelerations, then hold pins.
    m_defect = NX * (T + 1)
    m_acc0 = NV if spec.vdot_init is not None else 0
    m_accT = NV if spec.vdot_final is not None else 0
    hold_knots = list(range(lay.n_states - spec.hold_attitude_knots, lay.n_states))
    m_hold = 4 * len(hold_knots)
    m_eq = m_defect + m_acc0 + m_accT + m_hold
    q_hold = spec.s_final[0:4]

    def eval_eq(z):
        states, inputs, h = lay.unpack(z)
        dest = states[1:]                       # x_1 .. x_{T+1}
        u_next = inputs[np.minimum(np.arange(1, T + 2), T)]
        # Anchor list: T+1 defect anchors plus the accel endpoints.
        anchors_x = [dest]
        anchors_u = [u_next]
        if m_acc0:
            anchors_x.append(states[0:1])
            anchors_u.append(inputs[0:1])
        if m_accT:
            anchors_x.append(states[T:T + 1])
            anchors_u.append(inputs[T:T + 1])
        AX = np.concatenate(anchors_x, axis=0)
        AU = np.concatenate(anchors_u, axis=0)
        A = AX.shape[0]

        # One batched dynamics call covers base values and all central
        # perturbations: layout [base, (x_j +, x_j -)..., (u_j +, u_j -)...].
        steps_x = _FD_STEP * np.maximum(1.0, np.abs(AX))        # (A, 17)
        steps_u = _FD_STEP * np.maximum(1.0, np.abs(AU))        # (A, 3)
        big_x = [AX]
        big_u = [AU]
        for j in range(NX):
            for sign in (+1.0, -1.0):
                P = AX.copy()
                P[:, j] += sign * steps_x[:, j]
                big_x.append(P)
                big_u.append(AU)
        for j in range(NU):
            for sign in (+1.0, -1.0):
                P = AU.copy()
                P[:, j] += sign * steps_u[:, j]
                big_x.append(AX)
                big_u.append(P)
        F = state_derivative_batch(params, np.concatenate(big_x, axis=0),
                                   np.concatenate(big_u, axis=0))
        base = F[:A]
        blocks = F[A:].reshape(NX + NU, 2, A, NX)
        Dx = np.empty((A, NX, NX))
        Du = np.empty((A, NX, NU))
        for j in range(NX):
            Dx[:, :, j] = ((blocks[j, 0] - blocks[j, 1])
                           / (2.0 * steps_x[:, j])[:, None])
        for j in range(NU):
            Du[:, :, j] = ((blocks[NX + j, 0] - blocks[NX + j, 1])
                           / (2.0 * steps_u[:, j])[:, None])

        c = np.empty(m_eq)
        J = np.zeros((m_eq, n))
        # Defect rows.
        xdot = base[:T + 1]
        c[:m_defect] = (dest - states[:-1] - h * xdot).reshape(-1)
        eye = np.eye(NX)
        for t in range(T + 1):
            rows = slice(NX * t, NX * (t + 1))
            J[rows, lay.x_slice(t)] = -eye
            J[rows, lay.x_slice(t + 1)] += eye - h * Dx[t]
            ku = min(t + 1, T)
            J[rows, lay.u_slice(ku)] += -h * Du[t] * u_scale
            J[rows, lay.h_index] = -xdot[t]
        # Endpoint acceleration consistency.
        row = m_defect
        a = T + 1
        if m_acc0:
            c[row:row + NV] = base[a, NS:] - spec.vdot_init
            J[row:row + NV, lay.x_slice(0)] = Dx[a, NS:, :]
            J[row:row + NV, lay.u_slice(0)] = Du[a, NS:, :] * u_scale
            row += NV
            a += 1
        if m_accT:
            c[row:row + NV] = base[a, NS:] - spec.vdot_final
            J[row:row + NV, lay.x_slice(T)] = Dx[a, NS:, :]
            J[row:row + NV, lay.u_slice(T)] = Du[a, NS:, :] * u_scale
            row += NV
        # Hold-segment attitude pins.
        for k in hold_knots:
            c[row:row + 4] = states[k, 0:4] - q_hold
            qs = lay.x_slice(k).start
            J[row:row + 4, qs:qs + 4] = np.eye(4)
            row += 4
        return c, J

    # ---------------- inequality constraints ----------------
    m_norm = 2 * lay.n_states
    m_z = (T + 1) if spec.monotone_z else 0
    m_ineq = m_norm + m_z

    def eval_ineq(z):
        states, _, _ = lay.unpack(z)
        c = np.empty(m_ineq)
        J = np.zeros((m_ineq, n))
        for t in range(lay.n_states):
            q = states[t, 0:4]
            n2 = q @ q
            qs = lay.x_slice(t).start
            c[2 * t] = QUAT_NORM_LO ** 2 - n2
            c[2 * t + 1] = n2 - QUAT_NORM_HI ** 2
            J[2 * t, qs:qs + 4] = -2.0 * q
            J[2 * t + 1, qs:qs + 4] = 2.0 * q
        if m_z:
            dz = spec.monotone_z_min_step
            for t in range(T + 1):
                r = m_norm + t
                c[r] = states[t, 6] - states[t + 1, 6] + dz
                J[r, lay.x_slice(t).start + 6] = 1.0
                J[r, lay.x_slice(t + 1).start + 6] = -1.0
        return c, J

    # ---------------- objective ----------------
    p_goal = spec.s_final[4:7]

    def objective(z):
        states, inputs, h = lay.unpack(z)
        dp = states[:, 4:7] - p_goal
        val = (spec.w_position * float(np.sum(dp * dp))
               + spec.w_input * float(np.sum(inputs * inputs))
               + spec.w_duration * (T * h) ** 2)
        g = np.zeros(n)
        gs = np.zeros((lay.n_states, NX))
        gs[:, 4:7] = 2.0 * spec.w_position * dp
        g[:lay.off_u] = gs.reshape(-1)
        g[lay.off_u:-1] = (2.0 * spec.w_input * inputs * u_scale).reshape(-1)
        g[-1] = 2.0 * spec.w_duration * T * T * h
        return val, g

    problem = nlp.NlpProblem(
        n=n, objective=objective,
        m_eq=m_eq, eq_constraints=eval_eq,
        m_ineq=m_ineq, ineq_constraints=eval_ineq,
        lower=lower, upper=upper,
    )
    return problem, lay


def initial_guess(spec: TranscriptionSpec,
                  layout: TranscriptionLayout | None = None) -> np.ndarray:
    """Linear state interpolation (slerp for attitude), zero inputs, mid h."""
    T = spec.knots
    lay = layout or TranscriptionLayout(T, 1.0)
    states = np.zeros((lay.n_states, NX))
    x0 = np.concatenate([spec.s_init, spec.v_init])
    x1 = np.concatenate([spec.s_final, spec.v_final])
    q0 = quat_normalize(spec.s_init[0:4])
    q1 = quat_normalize(spec.s_final[0:4])
    for t in range(lay.n_states):
        a = min(t / T, 1.0)
        states[t] = (1.0 - a) * x0 + a * x1
        states[t, 0:4] = quat_slerp(q0, q1, a)
    h_mid = 0.5 * (spec.h_bounds[0] + spec.h_bounds[1])
    return lay.pack(states, np.zeros((lay.n_inputs, NU)), h_mid)


def solve_trajectory(spec: TranscriptionSpec, params: VehicleParams,
                     options: nlp.SolveOptions | None = None):
    """Build and solve the transcription.

    Returns
    -------
    (trajectory, report) : (Trajectory, nlp.SolveReport)
        The trajectory is the best iterate regardless of status; a
        ``converged`` report guarantees the Trajectory invariants (verified
        by an independent :func:`validate_trajectory` pass).
    """
    problem, lay = build_transcription(spec, params)
    z0 = initial_guess(spec, lay)
    report = nlp.solve(problem, options=options, x0=z0)
    states, inputs, h = lay.unpack(report.z)
    traj = Trajectory(states=states, inputs=inputs, h=h)
    if report.converged:
        check = validate_trajectory(traj, params, spec=spec)
        tol = (options.feasibility_tol if options else nlp.SolveOptions().feasibility_tol)
        if check.max_violation > 10.0 * tol:
            raise RuntimeError(
                f"solver reported convergence but independent validation found "
                f"violation {check.max_violation:.3e} ({check.worst_family})")
    return traj, report


@dataclass
class ViolationReport:
    """Per-constraint-family maximum violations of a candidate trajectory."""

    families: dict

    @property
    def max_violation(self) -> float:
        return max(self.families.values()) if self.families else 0.0

    @property
    def worst_family(self) -> str:
        return max(self.families, key=self.families.get)

    def ok(self, tol: float = 1e-6) -> bool:
        return self.max_violation <= tol


def validate_trajectory(traj: Trajectory, params: VehicleParams,
                        spec: TranscriptionSpec | None = None) -> ViolationReport:
    """Re-evaluate every constraint family at the trajectory, from scratch.

    Dynamics defects are recomputed through the public dynamics entry point;
    limits come from the vehicle parameters (or the spec's force override
    when a spec is supplied, which also enables the boundary, h-bound, hold
    and monotone-z checks).
    """
    X, U, h = traj.states, traj.inputs, traj.h
    T = traj.knot_count
    fam = {}

    dest = X[1:]
    u_next = U[np.minimum(np.arange(1, T + 2), T)]
    xdot = np.stack([state_derivative(params, dest[t], u_next[t])
                     for t in range(T + 1)])
    defects = dest - X[:-1] - h * xdot
    fam["dynamics_defect"] = float(np.max(np.abs(defects)))

    f_lo, f_hi = (spec.force_limits
                  if (spec is not None and spec.force_limits is not None)
                  else (params.force_min, params.force_max))
    f = U[:, 0]
    fam["force_limit"] = float(max(np.max(f - f_hi, initial=0.0),
                                   np.max(f_lo - f, initial=0.0)))

    norms = np.linalg.norm(X[:, 0:4], axis=1)
    fam["quat_norm"] = float(max(np.max(QUAT_NORM_LO - norms, initial=0.0),
                                 np.max(norms - QUAT_NORM_HI, initial=0.0)))

    for name, col, (lo, hi) in (
        ("psi_angle", 7, params.psi_limits),
        ("phi_angle", 8, params.phi_limits),
        ("psi_rate", 15, params.psi_rate_limits),
        ("phi_rate", 16, params.phi_rate_limits),
    ):
        vals = X[:, col]
        fam[name] = float(max(np.max(vals - hi, initial=0.0),
                              np.max(lo - vals, initial=0.0)))

    if spec is not None:
        fam["h_bounds"] = float(max(spec.h_bounds[0] - h, h - spec.h_bounds[1], 0.0))
        x0 = np.concatenate([spec.s_init, spec.v_init])
        fam["boundary_init"] = float(np.max(np.abs(X[0] - x0)))
        mask = np.concatenate([spec.s_final_mask, spec.v_final_mask])
        xT = np.concatenate([spec.s_final, spec.v_final])
        fam["boundary_final"] = (float(np.max(np.abs((X[T] - xT)[mask])))
                                 if np.any(mask) else 0.0)
        if spec.vdot_init is not None:
            a0 = state_derivative(params, X[0], U[0])[NS:]
            fam["accel_init"] = float(np.max(np.abs(a0 - spec.vdot_init)))
        if spec.vdot_final is not None:
            aT = state_derivative(params, X[T], U[T])[NS:]
            fam["accel_final"] = float(np.max(np.abs(aT - spec.vdot_final)))
        if spec.hold_attitude_knots:
            q_hold = spec.s_final[0:4]
            ks = range(T + 2 - spec.hold_attitude_knots, T + 2)
            fam["hold_attitude"] = float(max(np.max(np.abs(X[k, 0:4] - q_hold))
                                             for k in ks))
        if spec.monotone_z:
            dz = np.diff(X[:, 6])
            fam["monotone_z"] = float(np.max(spec.monotone_z_min_step - dz,
                                             initial=0.0))

    return ViolationReport(families=fam)


# ---------------------------------------------------------------------------
# Columnar text serialization (bit-exact round trip)
# ---------------------------------------------------------------------------

def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def save_trajectory(path, traj: Trajectory, metadata: dict | None = None) -> None:
    """Write a trajectory as columnar text.

    A leading comment block carries h, T and any metadata; the header row
    names the columns with units; each row is time, 17 state entries and 3
    input entries (the trailing knot row repeats the final input so rows
    stay rectangular; readers take inputs from rows 0..T).
    """
    T = traj.knot_count
    with open(path, "w") as fh:
        fh.write("# auvpilot trajectory v1\n")
        fh.write(f"# h_delta = {_fmt(traj.h)}\n")
        fh.write(f"# knots = {T}\n")
        for key, val in (metadata or {}).items():
            fh.write(f"# {key} = {val}\n")
        cols = ["time[s]"]
        cols += [f"{name}[{unit}]" for name, unit in STATE_COLUMNS]
        cols += [f"{name}[{unit}]" for name, unit in INPUT_COLUMNS]
        fh.write(" ".join(cols) + "\n")
        for t in range(T + 2):
            u = traj.inputs[min(t, T)]
            row = [_fmt(t * traj.h)]
            row += [_fmt(v) for v in traj.states[t]]
            row += [_fmt(v) for v in u]
            fh.write(" ".join(row) + "\n")


def load_trajectory(path):
    """Read a trajectory written by :func:`save_trajectory`.

    Returns
    -------
    (trajectory, metadata) : (Trajectory, dict)
    """
    meta = {}
    rows = []
    with open(path, "r") as fh:
        header_seen = False
        for line in fh:
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                body = line[1:].strip()
                if "=" in body:
                    key, val = body.split("=", 1)
                    meta[key.strip()] = val.strip()
                continue
            if not header_seen:
                header_seen = True  # column-name row
                continue
            rows.append([float(tok) for tok in line.split()])
    if "h_delta" not in meta:
        raise ValueError("trajectory file is missing the h_delta header")
    h = float(meta.pop("h_delta"))
    meta.pop("knots", None)
    data = np.asarray(rows, dtype=float)
    states = data[:, 1:1 + NX]
    inputs = data[:-1, 1 + NX:1 + NX + NU]
    return Trajectory(states=states, inputs=inputs, h=h), meta

"""8-DoF dynamics model of a torpedo-shaped AUV with a single vectored thruster.

The model follows the standard marine-craft formulation (Fossen, Handbook of
Marine Craft Hydrodynamics and Motion Control, Wiley 2011):

    M vdot + C(v) v + D(v) v + r(s) = tau(s, u)

with the mass matrix ``M`` composed of rigid-body and added-mass parts,
quadratic-plus-linear damping applied per axis, and a torque-only restoring
wrench (the vehicle is neutrally buoyant).  The thruster is mounted astern on
a pan-tilt unit; its yaw/pitch joints are modeled as ideal kinematic joints
whose reflected inertia sits in the mass matrix, and the pan-tilt linkage
only appears through the inverse-kinematics map to actuator lengths.

State layout (17 entries):

    s = (q_w, q_x, q_y, q_z, x, y, z, psi, phi)          9 generalized positions
    v = (w_x, w_y, w_z, vx, vy, vz, psid, phid)          8 generalized velocities

Linear velocity is expressed in the body frame and rotated to the world
frame inside :func:`state_derivative`.  The world frame is right-handed with
z up; gravity acts along -z.  The wrench layout is torque-first:
(tau_x, tau_y, tau_z, f_x, f_y, f_z) in the thruster frame, with the pan and
tilt joint torques occupying the tau_z and tau_y slots and the thrust force
the f_x slot.

The shipped default parameter set is synthetic (the slender-body pattern:
surge-light, sway/heave-heavy added mass, quadratic drag dominant) and is not
identified against any physical hull.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from functools import cached_property

import numpy as np
import scipy.linalg
import yaml

from .quatmath import (
    quat_derivative,
    quat_normalize,
    quat_to_rotation,
    quat_to_rotation_batch,
)

__all__ = [
    "GRAVITY",
    "CONFIG_SCHEMA_VERSION",
    "SingularMassError",
    "UnreachablePoseError",
    "LinkageGeometry",
    "VehicleParams",
    "FullState",
    "ControlInput",
    "default_params",
    "load_params",
    "save_params",
    "coriolis_matrix",
    "damping_force",
    "restoring_wrench",
    "thruster_jacobian",
    "thrust_wrench",
    "forward_dynamics",
    "state_derivative",
    "state_derivative_batch",
    "linkage_inverse_kinematics",
]

GRAVITY = 9.81  # m/s^2

CONFIG_SCHEMA_VERSION = 1

# Index blocks of the 17-entry state vector.
IQ = slice(0, 4)        # quaternion
IP = slice(4, 7)        # world position
IPSI, IPHI = 7, 8       # thruster angles
IW = slice(9, 12)       # body angular rate
IV = slice(12, 15)      # body linear velocity
IPSID, IPHID = 15, 16   # thruster angle rates
NX, NS, NV, NU = 17, 9, 8, 3


class SingularMassError(ValueError):
    """Total mass matrix is not positive definite (factorization failed)."""


class UnreachablePoseError(ValueError):
    """Pan-tilt linkage cannot realize the requested thruster angles."""


@dataclass(frozen=True)
class LinkageGeometry:
    """Parametric pan-tilt actuator pair.

    Each linear actuator connects a body anchor to a point on the thruster
    cradle; the cradle rotates about the pivot by yaw psi then pitch phi.
    Points are in the body frame (cradle points relative to the pivot, in the
    neutral thruster frame), lengths in meters.
    """

    pivot: np.ndarray
    cradle_left: np.ndarray
    cradle_right: np.ndarray
    body_left: np.ndarray
    body_right: np.ndarray
    stroke_min: float
    stroke_max: float

    def __post_init__(self):
        for name in ("pivot", "cradle_left", "cradle_right", "body_left", "body_right"):
            object.__setattr__(self, name, np.asarray(getattr(self, name), dtype=float))


@dataclass(frozen=True)
class VehicleParams:
    """Immutable hydrodynamic and geometric parameters.

    Matrices are 8x8 over the generalized-velocity ordering
    (w_x, w_y, w_z, vx, vy, vz, psid, phid); SI units throughout.
    """

    rigid_mass_matrix: np.ndarray      # kg / kg*m^2; identity blocks on the joints
    added_mass_matrix: np.ndarray      # symmetric PSD
    linear_damping: np.ndarray         # N*s/m and friends
    quadratic_damping: np.ndarray      # 8 per-axis coefficients, N*s^2/m^2
    center_of_gravity: np.ndarray      # m, body frame
    center_of_buoyancy: np.ndarray     # m, body frame
    weight_force: float                # |f_g| = |f_b|, N (neutral buoyancy)
    thruster_offset: np.ndarray        # m, body origin -> thrust application point
    force_min: float                   # N
    force_max: float                   # N
    psi_limits: tuple[float, float]    # rad
    phi_limits: tuple[float, float]    # rad
    psi_rate_limits: tuple[float, float]   # rad/s
    phi_rate_limits: tuple[float, float]   # rad/s
    linkage: LinkageGeometry

    def __post_init__(self):
        for name in ("rigid_mass_matrix", "added_mass_matrix", "linear_damping"):
            object.__setattr__(self, name, np.asarray(getattr(self, name), dtype=float).reshape(8, 8))
        object.__setattr__(self, "quadratic_damping",
                           np.asarray(self.quadratic_damping, dtype=float).reshape(8))
        for name in ("center_of_gravity", "center_of_buoyancy", "thruster_offset"):
            object.__setattr__(self, name, np.asarray(getattr(self, name), dtype=float).reshape(3))
        self._validate()

    def _validate(self):
        M = self.mass_matrix
        if not np.allclose(M, M.T, atol=1e-9):
            raise ValueError("total mass matrix must be symmetric")
        try:
            scipy.linalg.cholesky(M, lower=True)
        except scipy.linalg.LinAlgError as exc:
            raise SingularMassError("total mass matrix is not positive definite") from exc
        if not (self.force_min < 0.0 < self.force_max):
            raise ValueError("force limits must straddle zero")
        for lo, hi in (self.psi_limits, self.phi_limits,
                       self.psi_rate_limits, self.phi_rate_limits):
            if not (lo <= 0.0 <= hi):
                raise ValueError("thruster angle/rate limit intervals must contain zero")

    @cached_property
    def mass_matrix(self) -> np.ndarray:
        """Total mass matrix M = rigid + added."""
        return self.rigid_mass_matrix + self.added_mass_matrix

    @cached_property
    def _mass_cho(self):
        return scipy.linalg.cho_factor(self.mass_matrix, lower=True)

    def solve_mass(self, rhs: np.ndarray) -> np.ndarray:
        """Solve M x = rhs via the cached Cholesky factor (rhs: (8,) or (B, 8))."""
        rhs = np.asarray(rhs, dtype=float)
        if rhs.ndim == 1:
            return scipy.linalg.cho_solve(self._mass_cho, rhs)
        return scipy.linalg.cho_solve(self._mass_cho, rhs.T).T


@dataclass(frozen=True)
class FullState:
    """Generalized positions and velocities of the 17-entry state x = (s, v)."""

    s: np.ndarray  # (9,)
    v: np.ndarray  # (8,)

    def __post_init__(self):
        object.__setattr__(self, "s", np.asarray(self.s, dtype=float).reshape(NS))
        object.__setattr__(self, "v", np.asarray(self.v, dtype=float).reshape(NV))

    @classmethod
    def from_vector(cls, x) -> "FullState":
        x = np.asarray(x, dtype=float).reshape(NX)
        return cls(s=x[:NS], v=x[NS:])

    def as_vector(self) -> np.ndarray:
        return np.concatenate([self.s, self.v])

    @property
    def quaternion(self) -> np.ndarray:
        return self.s[0:4]

    @property
    def position(self) -> np.ndarray:
        return self.s[4:7]

    @property
    def thruster_angles(self) -> np.ndarray:
        return self.s[7:9]

    @property
    def angular_rate(self) -> np.ndarray:
        return self.v[0:3]

    @property
    def linear_velocity(self) -> np.ndarray:
        return self.v[3:6]


@dataclass(frozen=True)
class ControlInput:
    """Thrust magnitude and pan/tilt joint torques."""

    f: float = 0.0        # N
    tau_psi: float = 0.0  # N*m
    tau_phi: float = 0.0  # N*m

    @classmethod
    def from_vector(cls, u) -> "ControlInput":
        u = np.asarray(u, dtype=float).reshape(NU)
        return cls(f=float(u[0]), tau_psi=float(u[1]), tau_phi=float(u[2]))

    def as_vector(self) -> np.ndarray:
        return np.array([self.f, self.tau_psi, self.tau_phi])


def _state_vec(x) -> np.ndarray:
    if isinstance(x, FullState):
        return x.as_vector()
    return np.asarray(x, dtype=float).reshape(NX)


def _input_vec(u) -> np.ndarray:
    if isinstance(u, ControlInput):
        return u.as_vector()
    return np.asarray(u, dtype=float).reshape(NU)


def _vel_vec(v) -> np.ndarray:
    if isinstance(v, FullState):
        return v.v
    return np.asarray(v, dtype=float).reshape(NV)


# ---------------------------------------------------------------------------
# Default synthetic parameter set
# ---------------------------------------------------------------------------

def default_params() -> VehicleParams:
    """Synthetic slender-body parameter set used by the built-in scenarios.

    Not identified against any physical vehicle.  60 kg hull, buoyancy
    center 0.075 m above the gravity center, thruster 0.75 m astern,
    +/-45 deg thruster angles at +/-0.5 rad/s, +/-70 N thrust.
    """
    m = 60.0
    rigid = np.diag([0.8, 9.0, 9.0, m, m, m, 1.0, 1.0])
    added = np.diag([0.1, 6.0, 6.0, 5.0, 45.0, 45.0, 0.0, 0.0])
    d_lin = np.diag([0.5, 6.0, 6.0, 3.0, 40.0, 40.0, 0.5, 0.5])
    d_quad = np.array([1.0, 12.0, 12.0, 8.0, 90.0, 90.0, 0.1, 0.1])
    # Mounts chosen so each actuator length is strictly monotone in both
    # angles over the limit box, making the inverse-kinematics map injective.
    linkage = LinkageGeometry(
        pivot=np.array([-0.75, 0.0, 0.0]),
        cradle_left=np.array([-0.17, 0.125, -0.08]),
        cradle_right=np.array([-0.17, -0.125, -0.08]),
        body_left=np.array([-0.64, 0.13, -0.19]),
        body_right=np.array([-0.64, -0.13, -0.19]),
        stroke_min=0.05,
        stroke_max=0.50,
    )
    return VehicleParams(
        rigid_mass_matrix=rigid,
        added_mass_matrix=added,
        linear_damping=d_lin,
        quadratic_damping=d_quad,
        center_of_gravity=np.zeros(3),
        center_of_buoyancy=np.array([0.0, 0.0, 0.075]),
        weight_force=m * GRAVITY,
        thruster_offset=np.array([-0.75, 0.0, 0.0]),
        force_min=-70.0,
        force_max=70.0,
        psi_limits=(-np.pi / 4, np.pi / 4),
        phi_limits=(-np.pi / 4, np.pi / 4),
        psi_rate_limits=(-0.5, 0.5),
        phi_rate_limits=(-0.5, 0.5),
        linkage=linkage,
    )


# ---------------------------------------------------------------------------
# Configuration file I/O
# ---------------------------------------------------------------------------

def _params_to_dict(params: VehicleParams) -> dict:
    lg = params.linkage
    return {
        "schema_version": CONFIG_SCHEMA_VERSION,
        "vehicle": {
            "rigid_mass_matrix": params.rigid_mass_matrix.tolist(),
            "added_mass_matrix": params.added_mass_matrix.tolist(),
            "linear_damping": params.linear_damping.tolist(),
            "quadratic_damping": params.quadratic_damping.tolist(),
            "center_of_gravity": params.center_of_gravity.tolist(),
            "center_of_buoyancy": params.center_of_buoyancy.tolist(),
            "weight_force": float(params.weight_force),
            "thruster_offset": params.thruster_offset.tolist(),
            "force_limits": {"min": params.force_min, "max": params.force_max},
            "thruster_angle_limits": {
                "psi_min": params.psi_limits[0], "psi_max": params.psi_limits[1],
                "phi_min": params.phi_limits[0], "phi_max": params.phi_limits[1],
            },
            "thruster_rate_limits": {
                "psi_min": params.psi_rate_limits[0], "psi_max": params.psi_rate_limits[1],
                "phi_min": params.phi_rate_limits[0], "phi_max": params.phi_rate_limits[1],
            },
            "linkage_geometry": {
                "pivot": lg.pivot.tolist(),
                "cradle_left": lg.cradle_left.tolist(),
                "cradle_right": lg.cradle_right.tolist(),
                "body_left": lg.body_left.tolist(),
                "body_right": lg.body_right.tolist(),
                "stroke_min": lg.stroke_min,
                "stroke_max": lg.stroke_max,
            },
        },
    }


def _params_from_dict(doc: dict) -> VehicleParams:
    if not isinstance(doc, dict) or "schema_version" not in doc:
        raise ValueError("vehicle config is missing the mandatory schema_version field")
    if doc["schema_version"] != CONFIG_SCHEMA_VERSION:
        raise ValueError(f"unsupported config schema_version {doc['schema_version']!r}")
    v = doc["vehicle"]
    fl = v["force_limits"]
    al = v["thruster_angle_limits"]
    rl = v["thruster_rate_limits"]
    lg = v["linkage_geometry"]
    return VehicleParams(
        rigid_mass_matrix=v["rigid_mass_matrix"],
        added_mass_matrix=v["added_mass_matrix"],
        linear_damping=v["linear_damping"],
        quadratic_damping=v["quadratic_damping"],
        center_of_gravity=v["center_of_gravity"],
        center_of_buoyancy=v["center_of_buoyancy"],
        weight_force=float(v["weight_force"]),
        thruster_offset=v["thruster_offset"],
        force_min=float(fl["min"]),
        force_max=float(fl["max"]),
        psi_limits=(float(al["psi_min"]), float(al["psi_max"])),
        phi_limits=(float(al["phi_min"]), float(al["phi_max"])),
        psi_rate_limits=(float(rl["psi_min"]), float(rl["psi_max"])),
        phi_rate_limits=(float(rl["phi_min"]), float(rl["phi_max"])),
        linkage=LinkageGeometry(
            pivot=lg["pivot"],
            cradle_left=lg["cradle_left"],
            cradle_right=lg["cradle_right"],
            body_left=lg["body_left"],
            body_right=lg["body_right"],
            stroke_min=float(lg["stroke_min"]),
            stroke_max=float(lg["stroke_max"]),
        ),
    )


def load_params(path) -> VehicleParams:
    """Load vehicle parameters from a YAML config (schema_version mandatory)."""
    with open(path, "r") as fh:
        doc = yaml.safe_load(fh)
    return _params_from_dict(doc)


def save_params(path, params: VehicleParams) -> None:
    """Write vehicle parameters as a YAML config file (matrices row-major)."""
    with open(path, "w") as fh:
        yaml.safe_dump(_params_to_dict(params), fh, sort_keys=False)


# ---------------------------------------------------------------------------
# Model terms
# ---------------------------------------------------------------------------

def _skew(a: np.ndarray) -> np.ndarray:
    return np.array([
        [0.0, -a[2], a[1]],
        [a[2], 0.0, -a[0]],
        [-a[1], a[0], 0.0],
    ])


def coriolis_matrix(params: VehicleParams, v) -> np.ndarray:
    """Coriolis/centripetal matrix C(v) of the total mass matrix.

    Built from the angular and linear momenta (Kirchhoff form), adapted to
    the torque-first velocity ordering:

        C = [ -S(p_ang)  -S(p_lin)  0 ]
            [ -S(p_lin)      0      0 ]
            [     0          0      0 ]

    which is skew-symmetric by construction (hence v' C v = 0).  The two
    ideal joint coordinates carry no Coriolis coupling.
    """
    v = _vel_vec(v)
    p = params.mass_matrix @ v
    C = np.zeros((8, 8))
    C[0:3, 0:3] = -_skew(p[0:3])
    C[0:3, 3:6] = -_skew(p[3:6])
    C[3:6, 0:3] = -_skew(p[3:6])
    return C


def _coriolis_force_batch(params: VehicleParams, V: np.ndarray) -> np.ndarray:
    """C(v) v for a batch of velocities, via momenta cross products."""
    P = V @ params.mass_matrix.T
    omega, vlin = V[:, 0:3], V[:, 3:6]
    p_ang, p_lin = P[:, 0:3], P[:, 3:6]
    out = np.zeros_like(V)
    out[:, 0:3] = np.cross(omega, p_ang) + np.cross(vlin, p_lin)
    out[:, 3:6] = np.cross(omega, p_lin)
    return out


def damping_force(params: VehicleParams, v) -> np.ndarray:
    """Generalized damping force D(v) v = D_l v + diag(D_q |v|) v."""
    v = _vel_vec(v)
    return params.linear_damping @ v + params.quadratic_damping * np.abs(v) * v


def restoring_wrench(params: VehicleParams, q) -> np.ndarray:
    """Restoring generalized force r(s) (left-hand-side convention).

    Gravity and buoyancy are equal and opposite (neutral buoyancy), so the
    linear-force components vanish and only the torque from the separated
    centers of gravity and buoyancy remains.  Zero on the joint coordinates.
    """
    q = np.asarray(q, dtype=float).reshape(4)
    R = quat_to_rotation(q)
    f_b_body = R.T @ np.array([0.0, 0.0, params.weight_force])
    f_g_body = -f_b_body
    torque_exerted = (np.cross(params.center_of_gravity, f_g_body)
                      + np.cross(params.center_of_buoyancy, f_b_body))
    out = np.zeros(8)
    out[0:3] = -torque_exerted
    return out


def _restoring_batch(params: VehicleParams, Q: np.ndarray) -> np.ndarray:
    R = quat_to_rotation_batch(Q)
    up = np.array([0.0, 0.0, params.weight_force])
    f_b = np.einsum("bji,j->bi", R, up)
    lever = params.center_of_buoyancy - params.center_of_gravity
    out = np.zeros((Q.shape[0], 8))
    out[:, 0:3] = -np.cross(np.broadcast_to(lever, f_b.shape), f_b)
    return out


def _thrust_direction(psi, phi):
    """Unit thrust direction Rz(psi) Ry(phi) e_x in the body frame (batched)."""
    cpsi, spsi = np.cos(psi), np.sin(psi)
    cphi, sphi = np.cos(phi), np.sin(phi)
    return np.stack([cpsi * cphi, spsi * cphi, -sphi], axis=-1)


def thruster_jacobian(params: VehicleParams, s) -> np.ndarray:
    """Wrench-to-generalized-force map of the vectored thruster (8x6).

    Columns follow the torque-first wrench layout (tau_x, tau_y, tau_z,
    f_x, f_y, f_z) in the thruster frame, rotated from the body frame by yaw
    psi about z then pitch phi about y.  Force columns act at the thruster
    offset (force on the body plus the lever-arm torque); the tau_y and
    tau_z slots are the tilt and pan joint torques, which act on their joint
    coordinates with unit gain and nowhere else; the tau_x slot is an
    external roll torque at the thruster frame.
    """
    if isinstance(s, FullState):
        s = s.s
    s = np.asarray(s, dtype=float).reshape(-1)
    if s.size == NX:
        s = s[:NS]
    psi, phi = float(s[IPSI]), float(s[IPHI])
    Rz = np.array([
        [np.cos(psi), -np.sin(psi), 0.0],
        [np.sin(psi), np.cos(psi), 0.0],
        [0.0, 0.0, 1.0],
    ])
    Ry = np.array([
        [np.cos(phi), 0.0, np.sin(phi)],
        [0.0, 1.0, 0.0],
        [-np.sin(phi), 0.0, np.cos(phi)],
    ])
    R_thr = Rz @ Ry
    J = np.zeros((8, 6))
    # Force columns: body force plus lever-arm torque.
    J[3:6, 3:6] = R_thr
    J[0:3, 3:6] = _skew(params.thruster_offset) @ R_thr
    # Joint-torque slots: unit gain on the joint coordinates.
    J[6, 2] = 1.0   # pan torque tau_psi
    J[7, 1] = 1.0   # tilt torque tau_phi
    # Roll torque about the thruster axis acts on the body.
    J[0:3, 0] = R_thr[:, 0]
    return J


def thrust_wrench(u) -> np.ndarray:
    """Thruster-frame wrench (tau_x..f_z) produced by a control input."""
    u = _input_vec(u)
    w = np.zeros(6)
    w[1] = u[2]  # tilt joint torque
    w[2] = u[1]  # pan joint torque
    w[3] = u[0]  # axial thrust
    return w


def _thrust_force_batch(params: VehicleParams, S: np.ndarray, U: np.ndarray) -> np.ndarray:
    """Generalized force of the thrust inputs for a batch of (s, u)."""
    d = _thrust_direction(S[:, IPSI], S[:, IPHI])
    F = U[:, 0:1] * d
    out = np.zeros((S.shape[0], 8))
    out[:, 3:6] = F
    out[:, 0:3] = np.cross(np.broadcast_to(params.thruster_offset, F.shape), F)
    out[:, 6] = U[:, 1]
    out[:, 7] = U[:, 2]
    return out


def forward_dynamics(params: VehicleParams, x, u, tau_ext=None) -> np.ndarray:
    """Generalized accelerations vdot = M^-1 (J' w + tau_ext - Cv - D(v)v - r(s)).

    Solved through the cached Cholesky factorization of M; raises
    SingularMassError if M is not positive definite.  ``tau_ext`` is an
    optional extra generalized force (8,), used for disturbance injection.
    """
    x = _state_vec(x)
    u = _input_vec(u)
    rhs = (thruster_jacobian(params, x[:NS]) @ thrust_wrench(u)
           - coriolis_matrix(params, x[NS:]) @ x[NS:]
           - damping_force(params, x[NS:])
           - restoring_wrench(params, x[IQ]))
    if tau_ext is not None:
        rhs = rhs + np.asarray(tau_ext, dtype=float).reshape(NV)
    return params.solve_mass(rhs)


# Gain of the quaternion normalization feedback in the kinematics.  The term
# gamma*(1 - ||q||^2)*q vanishes identically on the unit sphere, so physical
# trajectories are unaffected; off the sphere it pulls the quaternion back to
# unit norm, which keeps discrete integration rules (the transcription's
# implicit Euler in particular) from ratcheting the norm out of its allowed
# band.
QUAT_NORM_GAIN = 5.0


def state_derivative(params: VehicleParams, x, u, tau_ext=None) -> np.ndarray:
    """Full 17-entry state derivative (single dynamics entry point).

    Concatenates the quaternion kinematics (with the norm-feedback term, see
    QUAT_NORM_GAIN), the body-to-world rotated position rates, the thruster
    angle rates, and the generalized accelerations from
    :func:`forward_dynamics`.
    """
    x = _state_vec(x)
    u = _input_vec(u)
    out = np.empty(NX)
    q = x[IQ]
    out[IQ] = (quat_derivative(q, x[IW])
               + QUAT_NORM_GAIN * (1.0 - q @ q) * q)
    out[IP] = quat_to_rotation(q) @ x[IV]
    out[IPSI] = x[IPSID]
    out[IPHI] = x[IPHID]
    out[NS:] = forward_dynamics(params, x, u, tau_ext=tau_ext)
    return out


def state_derivative_batch(params: VehicleParams, X: np.ndarray, U: np.ndarray,
                           tau_ext=None) -> np.ndarray:
    """Vectorized :func:`state_derivative` over a batch: (B,17),(B,3) -> (B,17).

    Used by the transcription Jacobians and the linearization sweep, where
    thousands of dynamics evaluations are needed per call.
    """
    X = np.asarray(X, dtype=float)
    U = np.asarray(U, dtype=float)
    B = X.shape[0]
    S, V = X[:, :NS], X[:, NS:]
    Q = X[:, IQ]
    out = np.empty((B, NX))
    out[:, IQ] = (quat_derivative(Q, X[:, IW])
                  + QUAT_NORM_GAIN * (1.0 - np.sum(Q * Q, axis=-1, keepdims=True)) * Q)
    Rb = quat_to_rotation_batch(Q)
    out[:, IP] = np.einsum("bij,bj->bi", Rb, X[:, IV])
    out[:, IPSI] = X[:, IPSID]
    out[:, IPHI] = X[:, IPHID]
    rhs = (_thrust_force_batch(params, S, U)
           - _coriolis_force_batch(params, V)
           - (V @ params.linear_damping.T + params.quadratic_damping * np.abs(V) * V)
           - _restoring_batch(params, Q))
    if tau_ext is not None:
        rhs = rhs + np.asarray(tau_ext, dtype=float).reshape(1, NV)
    out[:, NS:] = params.solve_mass(rhs)
    return out


def linkage_inverse_kinematics(params: VehicleParams, psi: float, phi: float):
    """Actuator lengths (l_left, l_right) realizing thruster angles (psi, phi).

    The cradle points rotate with the thruster frame about the pivot; each
    actuator length is the distance from its body anchor to its cradle
    point.  Raises UnreachablePoseError when a length falls outside the
    actuator stroke.
    """
    lg = params.linkage
    cpsi, spsi = np.cos(psi), np.sin(psi)
    cphi, sphi = np.cos(phi), np.sin(phi)
    R_thr = np.array([
        [cpsi * cphi, -spsi, cpsi * sphi],
        [spsi * cphi, cpsi, spsi * sphi],
        [-sphi, 0.0, cphi],
    ])
    lengths = []
    for cradle, anchor in ((lg.cradle_left, lg.body_left),
                           (lg.cradle_right, lg.body_right)):
        tip = lg.pivot + R_thr @ cradle
        lengths.append(float(np.linalg.norm(tip - anchor)))
    l1, l2 = lengths
    if not (lg.stroke_min <= l1 <= lg.stroke_max and lg.stroke_min <= l2 <= lg.stroke_max):
        raise UnreachablePoseError(
            f"pose (psi={psi:.4f}, phi={phi:.4f}) needs lengths ({l1:.4f}, {l2:.4f}) "
            f"outside stroke [{lg.stroke_min}, {lg.stroke_max}]")
    return l1, l2

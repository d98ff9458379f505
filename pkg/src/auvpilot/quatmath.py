"""Quaternion primitives shared by the dynamics, control and simulation modules.

Conventions
-----------
Scalar-first unit quaternions ``q = (q_w, q_x, q_y, q_z)`` with the Hamilton
product.  Attitude kinematics multiply the angular-rate quaternion from the
left,

    q_dot = 0.5 * (0, wx, wy, wz) (x) q

and ``quat_to_rotation`` returns the sandwich-product matrix ``R`` such that
``R @ v`` rotates a vector by ``q`` (body-to-world for an attitude
quaternion).  The reduced three-parameter chart drops the scalar part and is
valid on the q_w > 0 hemisphere; ``reconstruct_qw`` recovers the scalar part
as ``sqrt(1 - qx^2 - qy^2 - qz^2)``.

All functions are pure and accept/return plain numpy arrays, so they are safe
to call concurrently.  Batched variants accept leading batch dimensions and
are used by the transcription and linearization code paths.
"""

from __future__ import annotations

import numpy as np

__all__ = [
    "hamilton",
    "quat_conjugate",
    "quat_normalize",
    "quat_derivative",
    "quat_to_rotation",
    "quat_to_rotation_batch",
    "reconstruct_qw",
    "quat_error",
    "quat_angle",
    "quat_slerp",
    "quat_from_axis_angle",
    "quat_to_euler_zyx",
]


def hamilton(p, q):
    """Hamilton product p (x) q, vectorized over leading dimensions.

    Parameters
    ----------
    p, q : array_like, shape (..., 4)
        Scalar-first quaternions (not required to be unit norm).

    Returns
    -------
    ndarray, shape (..., 4)
    """
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    pw, pv = p[..., 0], p[..., 1:]
    qw, qv = q[..., 0], q[..., 1:]
    out = np.empty(np.broadcast_shapes(p.shape, q.shape), dtype=float)
    out[..., 0] = pw * qw - np.sum(pv * qv, axis=-1)
    out[..., 1:] = (pw[..., None] * qv + qw[..., None] * pv
                    + np.cross(pv, qv))
    return out


def quat_conjugate(q):
    """Conjugate (w, -x, -y, -z); equals the inverse for unit quaternions."""
    q = np.asarray(q, dtype=float)
    out = q.copy()
    out[..., 1:] *= -1.0
    return out


def quat_normalize(q):
    """Rescale to unit norm.  Raises ValueError for a near-zero quaternion."""
    q = np.asarray(q, dtype=float)
    n = np.linalg.norm(q, axis=-1, keepdims=True)
    if np.any(n < 1e-12):
        raise ValueError("cannot normalize a near-zero quaternion")
    return q / n


def quat_derivative(q, omega):
    """Quaternion kinematics: q_dot = 0.5 * (0, omega) (x) q.

    The angular-rate quaternion multiplies from the left.  The output is
    orthogonal to ``q``, so the quaternion norm is preserved under exact
    integration.

    Parameters
    ----------
    q : array_like, shape (..., 4)
        Attitude quaternion (approximately unit norm).
    omega : array_like, shape (..., 3)
        Angular rate [rad/s].

    Returns
    -------
    ndarray, shape (..., 4)
    """
    q = np.asarray(q, dtype=float)
    omega = np.asarray(omega, dtype=float)
    ow = np.zeros(omega.shape[:-1] + (4,), dtype=float)
    ow[..., 1:] = omega
    return 0.5 * hamilton(ow, q)


def quat_to_rotation(q):
    """Rotation matrix of the sandwich product q v q*.

    For a unit quaternion the result is proper orthogonal (det = +1); for an
    attitude quaternion it maps body-frame vectors to the world frame.
    """
    return quat_to_rotation_batch(np.asarray(q, dtype=float)[None, :])[0]


def quat_to_rotation_batch(q):
    """Batched :func:`quat_to_rotation`: (..., 4) -> (..., 3, 3)."""
    q = np.asarray(q, dtype=float)
    w, x, y, z = q[..., 0], q[..., 1], q[..., 2], q[..., 3]
    xx, yy, zz = x * x, y * y, z * z
    xy, xz, yz = x * y, x * z, y * z
    wx, wy, wz = w * x, w * y, w * z
    R = np.empty(q.shape[:-1] + (3, 3), dtype=float)
    R[..., 0, 0] = 1.0 - 2.0 * (yy + zz)
    R[..., 0, 1] = 2.0 * (xy - wz)
    R[..., 0, 2] = 2.0 * (xz + wy)
    R[..., 1, 0] = 2.0 * (xy + wz)
    R[..., 1, 1] = 1.0 - 2.0 * (xx + zz)
    R[..., 1, 2] = 2.0 * (yz - wx)
    R[..., 2, 0] = 2.0 * (xz - wy)
    R[..., 2, 1] = 2.0 * (yz + wx)
    R[..., 2, 2] = 1.0 - 2.0 * (xx + yy)
    return R


def reconstruct_qw(vec, tol=1e-9):
    """Scalar part of a reduced quaternion: sqrt(1 - ||vec||^2).

    Parameters
    ----------
    vec : array_like, shape (..., 3)
        Vector part (q_x, q_y, q_z).
    tol : float
        Amount by which ``||vec||^2`` may exceed 1 before a ValueError is
        raised (absorbs roundoff at the chart boundary).

    Returns
    -------
    ndarray, shape (...)
        Non-negative scalar part; the reconstructed quaternion has unit norm.
    """
    vec = np.asarray(vec, dtype=float)
    d = 1.0 - np.sum(vec * vec, axis=-1)
    if np.any(d < -tol):
        raise ValueError("reduced quaternion vector part exceeds unit norm")
    return np.sqrt(np.maximum(d, 0.0))


def quat_error(q, q_ref):
    """Attitude error as the vector part of q (x) q_ref^-1.

    The sign is chosen so the (implied) scalar part is non-negative, which
    makes the result invariant under the q/-q double cover and keeps it on
    the hemisphere where :func:`reconstruct_qw` is valid.

    Returns
    -------
    ndarray, shape (..., 3)
        Zero iff q and q_ref represent the same rotation.
    """
    e = hamilton(q, quat_conjugate(q_ref))
    sign = np.where(e[..., 0:1] < 0.0, -1.0, 1.0)
    return sign * e[..., 1:]


def quat_angle(q, q_ref):
    """Geodesic angle [rad] between two unit quaternions (range [0, pi])."""
    q = np.asarray(q, dtype=float)
    q_ref = np.asarray(q_ref, dtype=float)
    dot = np.clip(np.abs(np.sum(q * q_ref, axis=-1)), 0.0, 1.0)
    return 2.0 * np.arccos(dot)


def quat_slerp(q0, q1, t):
    """Shortest-arc spherical interpolation between unit quaternions.

    Falls back to normalized linear interpolation when the quaternions are
    nearly parallel.
    """
    q0 = np.asarray(q0, dtype=float)
    q1 = np.asarray(q1, dtype=float).copy()
    dot = float(np.dot(q0, q1))
    if dot < 0.0:
        q1 = -q1
        dot = -dot
    dot = min(dot, 1.0)
    if dot > 0.9995:
        out = q0 + t * (q1 - q0)
        return out / np.linalg.norm(out)
    ang = np.arccos(dot)
    s = np.sin(ang)
    return (np.sin((1.0 - t) * ang) * q0 + np.sin(t * ang) * q1) / s


def quat_from_axis_angle(axis, angle):
    """Unit quaternion for a rotation of ``angle`` [rad] about ``axis``."""
    axis = np.asarray(axis, dtype=float)
    n = np.linalg.norm(axis)
    if n < 1e-12:
        raise ValueError("rotation axis has near-zero magnitude")
    half = 0.5 * angle
    out = np.empty(4)
    out[0] = np.cos(half)
    out[1:] = np.sin(half) * axis / n
    return out


def quat_to_euler_zyx(q):
    """Intrinsic yaw-pitch-roll (Z-Y-X) angles [rad] of a unit quaternion.

    Returns
    -------
    (roll, pitch, yaw) : tuple of float
        pitch is clipped into [-pi/2, pi/2] at the gimbal singularity.
    """
    w, x, y, z = np.asarray(q, dtype=float)
    roll = np.arctan2(2.0 * (w * x + y * z), 1.0 - 2.0 * (x * x + y * y))
    pitch = np.arcsin(np.clip(2.0 * (w * y - z * x), -1.0, 1.0))
    yaw = np.arctan2(2.0 * (w * z + x * y), 1.0 - 2.0 * (y * y + z * z))
    return float(roll), float(pitch), float(yaw)

"""
Rotation parameterizations.

Euler convention: R = Rz(z) @ Ry(y) @ Rx(x) (extrinsic X-Y-Z), angles given
as the vector (x, y, z). Quaternions are ordered (qx, qy, qz, qw).
"""

import numpy as np

GIMBAL_EPS = 1e-7
ORTHO_TOL = 1e-6


def rot_x(angle: float) -> np.ndarray:
    c, s = np.cos(angle), np.sin(angle)
    return np.array([[1.0, 0.0, 0.0], [0.0, c, -s], [0.0, s, c]])


def rot_y(angle: float) -> np.ndarray:
    c, s = np.cos(angle), np.sin(angle)
    return np.array([[c, 0.0, s], [0.0, 1.0, 0.0], [-s, 0.0, c]])


def rot_z(angle: float) -> np.ndarray:
    c, s = np.cos(angle), np.sin(angle)
    return np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])


def wrap_angle(angle):
    """Map angles into (-pi, pi]."""
    wrapped = np.mod(np.asarray(angle, dtype=np.float64) + np.pi, 2.0 * np.pi) - np.pi
    wrapped = np.where(wrapped <= -np.pi, wrapped + 2.0 * np.pi, wrapped)
    return wrapped if wrapped.ndim else float(wrapped)


def orthonormality_error(R: np.ndarray) -> float:
    """Max-abs deviation of R^T R from identity."""
    R = np.asarray(R, dtype=np.float64)
    return float(np.max(np.abs(R.T @ R - np.eye(3))))


def is_rotation(R: np.ndarray, tol: float = ORTHO_TOL) -> bool:
    R = np.asarray(R, dtype=np.float64)
    if R.shape != (3, 3) or not np.all(np.isfinite(R)):
        return False
    return orthonormality_error(R) <= tol and abs(np.linalg.det(R) - 1.0) <= tol


def nearest_rotation(M: np.ndarray) -> np.ndarray:
    """Polar projection of a 3x3 matrix onto SO(3)."""
    U, _, Vt = np.linalg.svd(np.asarray(M, dtype=np.float64))
    D = np.eye(3)
    D[2, 2] = np.sign(np.linalg.det(U @ Vt)) or 1.0
    return U @ D @ Vt


def euler_to_matrix(angles) -> np.ndarray:
    """Rotation matrix for Euler angles (x, y, z) in radians."""
    x, y, z = np.asarray(angles, dtype=np.float64).reshape(3)
    return rot_z(z) @ rot_y(y) @ rot_x(x)


def matrix_to_euler(R: np.ndarray) -> np.ndarray:
    """
    Euler angles (x, y, z) of a rotation matrix.

    At gimbal lock (|y| = pi/2) only x + z or x - z is determined; the
    representative with x = 0 is returned.

    Raises:
        ValueError: If R is not a rotation within 1e-6
    """
    R = np.asarray(R, dtype=np.float64)
    if not is_rotation(R):
        raise ValueError("matrix_to_euler: input is not an orthonormal rotation")
    sy = float(np.clip(-R[2, 0], -1.0, 1.0))
    y = np.arcsin(sy)
    if np.hypot(R[0, 0], R[1, 0]) < GIMBAL_EPS:
        x = 0.0
        z = np.arctan2(-R[0, 1], R[1, 1])
    else:
        x = np.arctan2(R[2, 1], R[2, 2])
        z = np.arctan2(R[1, 0], R[0, 0])
    return np.array([wrap_angle(x), y, wrap_angle(z)])


def rotation_angle(R: np.ndarray) -> float:
    """Geodesic angle of a rotation in radians."""
    R = np.asarray(R, dtype=np.float64)
    d = 0.5 * (np.trace(R) - 1.0)
    return float(np.arccos(max(min(d, 1.0), -1.0)))


def quat_to_matrix(q) -> np.ndarray:
    """
    Rotation matrix of a quaternion (qx, qy, qz, qw); the input is normalized.

    Raises:
        ValueError: On a zero-norm quaternion
    """
    q = np.asarray(q, dtype=np.float64).reshape(4)
    n = np.linalg.norm(q)
    if n == 0.0 or not np.isfinite(n):
        raise ValueError("quat_to_matrix: zero-norm quaternion")
    x, y, z, w = q / n
    return np.array([
        [1 - 2 * (y * y + z * z), 2 * (x * y - z * w), 2 * (x * z + y * w)],
        [2 * (x * y + z * w), 1 - 2 * (x * x + z * z), 2 * (y * z - x * w)],
        [2 * (x * z - y * w), 2 * (y * z + x * w), 1 - 2 * (x * x + y * y)],
    ])


def matrix_to_quat(R: np.ndarray) -> np.ndarray:
    """Unit quaternion (qx, qy, qz, qw) with qw >= 0 for a rotation matrix."""
    R = np.asarray(R, dtype=np.float64)
    if not is_rotation(R):
        raise ValueError("matrix_to_quat: input is not an orthonormal rotation")
    trace = np.trace(R)
    if trace > 0.0:
        s = 2.0 * np.sqrt(trace + 1.0)
        q = np.array([(R[2, 1] - R[1, 2]) / s, (R[0, 2] - R[2, 0]) / s,
                      (R[1, 0] - R[0, 1]) / s, 0.25 * s])
    elif R[0, 0] > R[1, 1] and R[0, 0] > R[2, 2]:
        s = 2.0 * np.sqrt(1.0 + R[0, 0] - R[1, 1] - R[2, 2])
        q = np.array([0.25 * s, (R[0, 1] + R[1, 0]) / s,
                      (R[0, 2] + R[2, 0]) / s, (R[2, 1] - R[1, 2]) / s])
    elif R[1, 1] > R[2, 2]:
        s = 2.0 * np.sqrt(1.0 + R[1, 1] - R[0, 0] - R[2, 2])
        q = np.array([(R[0, 1] + R[1, 0]) / s, 0.25 * s,
                      (R[1, 2] + R[2, 1]) / s, (R[0, 2] - R[2, 0]) / s])
    else:
        s = 2.0 * np.sqrt(1.0 + R[2, 2] - R[0, 0] - R[1, 1])
        q = np.array([(R[0, 2] + R[2, 0]) / s, (R[1, 2] + R[2, 1]) / s,
                      0.25 * s, (R[1, 0] - R[0, 1]) / s])
    q = q / np.linalg.norm(q)
    return -q if q[3] < 0 else q

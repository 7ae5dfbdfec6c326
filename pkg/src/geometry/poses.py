"""
Pose value types and trajectory integration.

A relative pose of frame t is the transform of frame t expressed in frame
t-1 coordinates, so integration right-multiplies: P_t = P_{t-1} @ T(rel_t).
"""

from dataclasses import dataclass, field
from typing import Iterable, List, Optional, Sequence

import numpy as np

from .rotations import (
    euler_to_matrix,
    matrix_to_euler,
    nearest_rotation,
    orthonormality_error,
    wrap_angle,
)

POSE_TOL = 1e-6


@dataclass(frozen=True, eq=False)
class Pose6DoF:
    """Translation (meters) and Euler angles (radians, wrapped to (-pi, pi])."""

    translation: np.ndarray
    rotation: np.ndarray

    def __post_init__(self):
        t = np.array(self.translation, dtype=np.float64).reshape(3)
        r = wrap_angle(np.array(self.rotation, dtype=np.float64).reshape(3))
        if not (np.all(np.isfinite(t)) and np.all(np.isfinite(r))):
            raise ValueError("Pose6DoF components must be finite")
        t.flags.writeable = False
        r = np.array(r)
        r.flags.writeable = False
        object.__setattr__(self, "translation", t)
        object.__setattr__(self, "rotation", r)

    @classmethod
    def zero(cls) -> "Pose6DoF":
        return cls(np.zeros(3), np.zeros(3))

    @classmethod
    def from_vector(cls, values) -> "Pose6DoF":
        """From (tx, ty, tz, rx, ry, rz)."""
        v = np.asarray(values, dtype=np.float64).reshape(6)
        return cls(v[:3], v[3:])

    def as_vector(self) -> np.ndarray:
        return np.concatenate([self.translation, self.rotation])

    def to_se3(self) -> "PoseSE3":
        return PoseSE3.from_rt(euler_to_matrix(self.rotation), self.translation)

    @classmethod
    def from_se3(cls, pose: "PoseSE3") -> "Pose6DoF":
        return cls(pose.translation, matrix_to_euler(pose.rotation))


@dataclass(frozen=True, eq=False)
class PoseSE3:
    """4x4 rigid transform with an orthonormal rotation block."""

    matrix: np.ndarray = field(default_factory=lambda: np.eye(4))

    def __post_init__(self):
        m = np.array(self.matrix, dtype=np.float64)
        if m.shape != (4, 4):
            raise ValueError(f"PoseSE3 needs a 4x4 matrix, got {m.shape}")
        if not np.all(np.isfinite(m)):
            raise ValueError("PoseSE3 matrix must be finite")
        if not np.allclose(m[3], [0.0, 0.0, 0.0, 1.0], atol=POSE_TOL, rtol=0.0):
            raise ValueError(f"PoseSE3 bottom row must be (0, 0, 0, 1), got {m[3]}")
        R = m[:3, :3]
        if orthonormality_error(R) > POSE_TOL or abs(np.linalg.det(R) - 1.0) > POSE_TOL:
            raise ValueError("PoseSE3 rotation block is not orthonormal")
        m[3] = [0.0, 0.0, 0.0, 1.0]
        m.flags.writeable = False
        object.__setattr__(self, "matrix", m)

    @classmethod
    def identity(cls) -> "PoseSE3":
        return cls(np.eye(4))

    @classmethod
    def from_rt(cls, rotation, translation) -> "PoseSE3":
        m = np.eye(4)
        m[:3, :3] = rotation
        m[:3, 3] = np.asarray(translation, dtype=np.float64).reshape(3)
        return cls(m)

    @property
    def rotation(self) -> np.ndarray:
        return self.matrix[:3, :3]

    @property
    def translation(self) -> np.ndarray:
        return self.matrix[:3, 3]

    def compose(self, other: "PoseSE3") -> "PoseSE3":
        """``self @ other`` with the rotation block projected back onto SO(3)."""
        m = self.matrix @ other.matrix
        m[:3, :3] = nearest_rotation(m[:3, :3])
        return PoseSE3(m)

    def __matmul__(self, other: "PoseSE3") -> "PoseSE3":
        return self.compose(other)

    def inverse(self) -> "PoseSE3":
        Rt = self.rotation.T
        return PoseSE3.from_rt(Rt, -Rt @ self.translation)


def pose_compose(a: PoseSE3, b: PoseSE3) -> PoseSE3:
    return a.compose(b)


def pose_inverse(a: PoseSE3) -> PoseSE3:
    return a.inverse()


def integrate_relative(rel: Iterable[Pose6DoF], origin: Optional[PoseSE3] = None) -> List[PoseSE3]:
    """
    Chain relative poses into absolute poses.

    Args:
        rel: Relative poses rel_1..rel_n
        origin: P_0 (identity when omitted)

    Returns:
        [P_0, P_1, ..., P_n] with P_t = P_{t-1} @ T(rel_t)
    """
    current = origin if origin is not None else PoseSE3.identity()
    poses = [current]
    for step in rel:
        current = current.compose(step.to_se3())
        poses.append(current)
    return poses


def relative_poses(trajectory: Sequence[PoseSE3]) -> List[Pose6DoF]:
    """Element-wise relative poses inv(P_{t-1}) @ P_t of a trajectory."""
    return [
        Pose6DoF.from_se3(prev.inverse().compose(cur))
        for prev, cur in zip(trajectory[:-1], trajectory[1:])
    ]


def absolute_6dof(trajectory: Sequence[PoseSE3], origin: Optional[PoseSE3] = None) -> List[Pose6DoF]:
    """6-DoF parameters of each pose relative to ``origin`` (P_0 by default)."""
    if not trajectory:
        return []
    base = (origin if origin is not None else trajectory[0]).inverse()
    return [Pose6DoF.from_se3(base.compose(p)) for p in trajectory]

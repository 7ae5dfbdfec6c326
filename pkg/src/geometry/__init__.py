"""SE(3) pose algebra and trajectory alignment."""

from .rotations import (
    euler_to_matrix,
    matrix_to_euler,
    quat_to_matrix,
    matrix_to_quat,
    rotation_angle,
    rot_x,
    rot_y,
    rot_z,
    wrap_angle,
    is_rotation,
    nearest_rotation,
)
from .poses import (
    Pose6DoF,
    PoseSE3,
    pose_compose,
    pose_inverse,
    integrate_relative,
    relative_poses,
    absolute_6dof,
)
from .alignment import umeyama_align, apply_similarity, alignment_residual

__all__ = [
    "euler_to_matrix",
    "matrix_to_euler",
    "quat_to_matrix",
    "matrix_to_quat",
    "rotation_angle",
    "rot_x",
    "rot_y",
    "rot_z",
    "wrap_angle",
    "is_rotation",
    "nearest_rotation",
    "Pose6DoF",
    "PoseSE3",
    "pose_compose",
    "pose_inverse",
    "integrate_relative",
    "relative_poses",
    "absolute_6dof",
    "umeyama_align",
    "apply_similarity",
    "alignment_residual",
]

"""Regression of a 6-DoF pose from a recurrent output map."""

from dataclasses import dataclass

from src.geometry import Pose6DoF
from src.tensor import Tensor, ops
from src.utils.errors import ShapeError

POSE_DIM = 6


@dataclass(frozen=True)
class SE3HeadParams:
    weight: Tensor  # 6 x C
    bias: Tensor  # 6


def se3_head(output: Tensor, params: SE3HeadParams) -> Tensor:
    """Linear map of the channel means to (tx, ty, tz, rx, ry, rz)."""
    if params.weight.shape[0] != POSE_DIM or params.bias.shape != (POSE_DIM,):
        raise ShapeError(f"se3_head: weight {params.weight.shape} must have {POSE_DIM} rows")
    if output.ndim != 3 or output.shape[0] != params.weight.shape[1]:
        raise ShapeError(f"se3_head: {output.shape} does not match weight {params.weight.shape}")
    return ops.linear(ops.global_avg_pool(output), params.weight, params.bias)


def to_pose(vector: Tensor) -> Pose6DoF:
    """Untracked Pose6DoF view of a head output."""
    return Pose6DoF.from_vector(vector.data)

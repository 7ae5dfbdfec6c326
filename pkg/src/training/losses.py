"""Pose losses on relative (local) and absolute (global) 6-DoF outputs."""

from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from src.geometry import Pose6DoF
from src.tensor import Tensor, ops

PoseTarget = Union[Pose6DoF, np.ndarray, Sequence[float]]


@dataclass(frozen=True)
class LossConfig:
    k: float = 100.0  # rotation-balance weight

    def __post_init__(self):
        if not self.k > 0:
            raise ValueError(f"k must be > 0, got {self.k}")


def _target(value: PoseTarget) -> Tensor:
    if isinstance(value, Pose6DoF):
        return Tensor(value.as_vector())
    return Tensor(np.asarray(value, dtype=np.float64).reshape(6))


def pose_error(pred: Tensor, target: PoseTarget, k: float) -> Tensor:
    """||p_hat - p|| + k * ||phi_hat - phi|| for one pose."""
    diff = ops.sub(pred, _target(target))
    return ops.add(ops.norm2(diff[:3]), ops.scale(ops.norm2(diff[3:]), k))


def _check(pred: Sequence[Tensor], gt: Sequence[PoseTarget], k: float) -> None:
    if len(pred) != len(gt):
        raise ValueError(f"prediction/ground-truth length mismatch: {len(pred)} vs {len(gt)}")
    if len(pred) == 0:
        raise ValueError("loss over an empty sequence")
    LossConfig(k)


def _sum(terms: Sequence[Tensor]) -> Tensor:
    total = terms[0]
    for term in terms[1:]:
        total = ops.add(total, term)
    return total


def loss_local(pred: Sequence[Tensor], gt: Sequence[PoseTarget], k: float) -> Tensor:
    """Mean over steps of the relative-pose error."""
    _check(pred, gt, k)
    return ops.scale(_sum([pose_error(p, g, k) for p, g in zip(pred, gt)]), 1.0 / len(pred))


def loss_global(pred: Sequence[Tensor], gt: Sequence[PoseTarget], k: float) -> Tensor:
    """Absolute-pose errors weighted 1/i for the i-th frame (1-based)."""
    _check(pred, gt, k)
    return _sum([ops.scale(pose_error(p, g, k), 1.0 / i) for i, (p, g) in enumerate(zip(pred, gt), start=1)])


def loss_total(local: Tensor, global_: Tensor) -> Tensor:
    return ops.add(local, global_)

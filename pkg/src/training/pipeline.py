"""
One window through the whole model: tracking, memory selection, refining.
"""

from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from src.geometry import Pose6DoF, PoseSE3, absolute_6dof, integrate_relative
from src.memory import MemoryBuffer, MemoryPolicy
from src.model import ModelParams, TrackingResult, to_pose, track_sequence
from src.refining import RefiningResult, refine_sequence
from src.tensor import Tensor, ops
from src.utils.config import TrainingConfig
from src.utils.logger import setup_logger

from .losses import loss_global, loss_local, loss_total

logger = setup_logger(__name__)


@dataclass(frozen=True)
class WindowOutputs:
    tracking: TrackingResult
    refining: Optional[RefiningResult]
    tracking_poses: List[PoseSE3]  # integrated tracking poses, frames 0..T
    memory_frames: Tuple[int, ...]

    def absolute_poses(self) -> List[PoseSE3]:
        """Poses of frames 0..T w.r.t. the window's first frame."""
        if self.refining is None:
            return list(self.tracking_poses)
        return [PoseSE3.identity()] + [to_pose(v).to_se3() for v in self.refining.absolute]


@dataclass(frozen=True)
class WindowLoss:
    local: Tensor
    global_: Tensor
    total: Tensor


def run_window(
    frames: Sequence[Tensor],
    params: ModelParams,
    config: TrainingConfig,
    record_attention: bool = False,
) -> WindowOutputs:
    """
    Track a window, fill the memory from the tracking pass and refine.

    Args:
        frames: T+1 frames of the window
        params: Model parameters (leaves when gradients are wanted)
        config: Memory thresholds, ablation switches, gradient stop
        record_attention: Keep per-step attention weights

    Returns:
        WindowOutputs
    """
    tracking = track_sequence(frames, params)
    integrated = integrate_relative(tracking.relative_poses())
    if not config.use_refining:
        return WindowOutputs(tracking, None, integrated, ())

    buffer = MemoryBuffer(MemoryPolicy.from_config(config))
    for t, hidden in enumerate(tracking.hidden, start=1):
        buffer.observe(hidden.detach() if config.detach_memory else hidden, integrated[t], t)
    memory = [slot.hidden for slot in buffer.snapshot()]
    logger.debug(f"memory holds frames {buffer.frames()} of {len(tracking)}")

    refining = refine_sequence(
        tracking.features,
        memory,
        params,
        use_temporal=config.use_temporal_attention,
        use_spatial=config.use_spatial_attention,
        record_attention=record_attention,
    )
    return WindowOutputs(tracking, refining, integrated, buffer.frames())


def window_targets(gt_poses: Sequence[PoseSE3]) -> Tuple[List[Pose6DoF], List[Pose6DoF]]:
    """Relative and window-origin absolute 6-DoF targets for frames 1..T."""
    absolute = absolute_6dof(gt_poses)[1:]
    relative = [
        Pose6DoF.from_se3(prev.inverse().compose(cur))
        for prev, cur in zip(gt_poses[:-1], gt_poses[1:])
    ]
    return relative, absolute


def window_loss(outputs: WindowOutputs, gt_poses: Sequence[PoseSE3], k: float) -> WindowLoss:
    """
    Composite loss of one window.

    The tracking-only variant has no differentiable absolute output, so its
    global term is a constant zero.
    """
    relative, absolute = window_targets(gt_poses)
    local = loss_local(outputs.tracking.relative, relative, k)
    if outputs.refining is None:
        global_ = Tensor(0.0)
    else:
        global_ = loss_global(outputs.refining.absolute, absolute, k)
    return WindowLoss(local, global_, loss_total(local, global_))


def mean_loss(losses: Sequence[WindowLoss]) -> WindowLoss:
    """Arithmetic mean over a batch, summed in batch order."""
    n = len(losses)

    def _mean(parts: List[Tensor]) -> Tensor:
        total = parts[0]
        for part in parts[1:]:
            total = ops.add(total, part)
        return ops.scale(total, 1.0 / n)

    return WindowLoss(
        _mean([l.local for l in losses]),
        _mean([l.global_ for l in losses]),
        _mean([l.total for l in losses]),
    )

"""Sliding-window inference over a frame stream."""

from typing import Callable, Dict, List, Optional, Sequence

import numpy as np

from src.geometry import PoseSE3
from src.model import ModelParams
from src.tensor import Tensor, no_grad
from src.utils.config import TrainingConfig
from src.utils.logger import setup_logger

from .pipeline import run_window

logger = setup_logger(__name__)

# Maps the frames of one window to their poses w.r.t. the window's first frame.
WindowEstimator = Callable[[Sequence[Tensor]], List[PoseSE3]]


def window_starts(frame_count: int, window_length: int, stride: int) -> List[int]:
    """
    First frame of every window.

    Consecutive windows advance by ``min(stride, L - 1)`` so that each window
    shares at least its first frame with the previous one; the last window
    is the first one reaching the end of the stream.
    """
    if window_length < 2:
        raise ValueError(f"window length must be >= 2, got {window_length}")
    if stride < 1:
        raise ValueError(f"stride must be >= 1, got {stride}")
    step = min(stride, window_length - 1)
    starts, start = [], 0
    while True:
        starts.append(start)
        if start + window_length >= frame_count:
            return starts
        start += step


def sliding_window_infer(
    frames: Sequence[Tensor],
    window_length: int,
    stride: int,
    estimate_window: WindowEstimator,
    origin: Optional[PoseSE3] = None,
) -> List[PoseSE3]:
    """
    Estimate a whole trajectory window by window.

    Each window's poses are re-anchored on the trajectory pose of its first
    frame; where windows overlap the latest window's value is kept.

    Args:
        frames: The stream
        window_length: Frames per window (L >= 2)
        stride: Requested advance between windows
        estimate_window: Per-window pose estimator
        origin: Pose of frame 0 (identity by default)

    Returns:
        One absolute pose per frame
    """
    n = len(frames)
    if n == 0:
        return []
    trajectory: List[Optional[PoseSE3]] = [None] * n
    trajectory[0] = origin if origin is not None else PoseSE3.identity()
    if n == 1:
        return [trajectory[0]]

    starts = window_starts(n, window_length, stride)
    for start in starts:
        end = min(start + window_length, n)
        anchor = trajectory[start]
        local = estimate_window(frames[start:end])
        if len(local) != end - start:
            raise ValueError(f"estimator returned {len(local)} poses for {end - start} frames")
        for offset in range(1, end - start):
            trajectory[start + offset] = anchor.compose(local[offset])
    logger.info(f"Sliding-window inference: {n} frames, {len(starts)} windows (L={window_length})")
    return trajectory


def model_window_estimator(params: ModelParams, config: TrainingConfig) -> WindowEstimator:
    """Window estimator running the model without recording gradients."""

    def estimate(window: Sequence[Tensor]) -> List[PoseSE3]:
        with no_grad():
            return run_window(window, params, config).absolute_poses()

    return estimate


def infer_trajectory(
    params: ModelParams,
    frames: Sequence[np.ndarray],
    config: TrainingConfig,
    window_length: Optional[int] = None,
    stride: Optional[int] = None,
) -> List[PoseSE3]:
    """Model trajectory of a frame stream with the config's window length."""
    window_length = window_length or config.window_length
    stride = stride or window_length
    tensors = [Tensor(f) for f in frames]
    return sliding_window_infer(tensors, window_length, stride, model_window_estimator(params, config))


def evaluate_endpoints(
    params: ModelParams,
    frames: Sequence[np.ndarray],
    gt_poses: Sequence[PoseSE3],
    config: TrainingConfig,
    stride: Optional[int] = None,
) -> Dict[str, float]:
    """
    Endpoint translation error of the refined and the tracking-only trajectory.

    Returns:
        Dictionary with ``refined_endpoint_error`` and ``tracking_endpoint_error`` (m)
    """
    if len(frames) != len(gt_poses):
        raise ValueError(f"{len(frames)} frames but {len(gt_poses)} ground-truth poses")
    gt_end = gt_poses[0].inverse().compose(gt_poses[-1]).translation

    errors = {}
    for key, use_refining in (("refined_endpoint_error", True), ("tracking_endpoint_error", False)):
        variant = config.with_overrides(use_refining=use_refining)
        trajectory = infer_trajectory(params, frames, variant, stride=stride)
        errors[key] = float(np.linalg.norm(trajectory[-1].translation - gt_end))
    logger.info(f"Endpoint errors: refined {errors['refined_endpoint_error']:.4f} m, "
                f"tracking {errors['tracking_endpoint_error']:.4f} m")
    return errors

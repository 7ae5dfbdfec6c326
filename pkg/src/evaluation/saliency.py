"""Pixel saliency of a pose output with respect to the input frames."""

from typing import List, Optional, Sequence

import numpy as np

from src.model import ModelParams
from src.tensor import Tensor, ops
from src.training.pipeline import run_window
from src.utils.config import TrainingConfig
from src.utils.logger import setup_logger

logger = setup_logger(__name__)


def saliency_map(
    params: ModelParams,
    frames: Sequence[np.ndarray],
    target: int,
    config: TrainingConfig,
    use_refining: Optional[bool] = None,
) -> np.ndarray:
    """
    Gradient magnitude of the mean 6-DoF output of one frame w.r.t. every pixel.

    Args:
        params: Model parameters
        frames: Window of frames, each ``3 x H x W``
        target: Frame whose pose is explained, 1 <= target < len(frames)
        config: Memory and attention settings; gradients always flow
            through the memory here
        use_refining: Override of ``config.use_refining``; without refining
            the tracking relative pose of the target step is explained

    Returns:
        Array ``len(frames) x H x W``, max over RGB of |d mean(pose) / d pixel|
    """
    if not 1 <= target < len(frames):
        raise ValueError(f"target must be in [1, {len(frames) - 1}], got {target}")
    variant = config.with_overrides(detach_memory=False, use_refining=use_refining)

    inputs: List[Tensor] = [Tensor(f, requires_grad=True, name=f"frame{i}") for i, f in enumerate(frames)]
    outputs = run_window(inputs, params.detached(), variant)
    poses = outputs.refining.absolute if outputs.refining is not None else outputs.tracking.relative
    ops.mean(poses[target - 1]).backward()

    maps = []
    for frame in inputs:
        if frame.grad is None:
            maps.append(np.zeros(frame.shape[1:]))
        else:
            maps.append(np.max(np.abs(frame.grad.data), axis=0))
    result = np.stack(maps)
    logger.info(f"Saliency for frame {target}: max {result.max():.3e} over {len(frames)} frames")
    return result

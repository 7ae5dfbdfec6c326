"""Training loop over windows sampled from a set of sequences."""

from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional, Protocol, Sequence, Tuple, Union

import numpy as np
import pandas as pd

from src.geometry import PoseSE3
from src.model import ModelParams, save_checkpoint
from src.tensor import Tensor
from src.utils.config import TrainingConfig
from src.utils.errors import TrainingDivergedError
from src.utils.logger import setup_logger

from .optimizer import OptimizerState, adam_step, lr_at
from .pipeline import mean_loss, run_window, window_loss

logger = setup_logger(__name__)

HISTORY_COLUMNS = ["iteration", "loss_local", "loss_global", "loss_total"]


class PoseSequence(Protocol):
    frames: Sequence[np.ndarray]
    absolute: Sequence[PoseSE3]


@dataclass
class TrainingResult:
    params: ModelParams
    history: pd.DataFrame
    optimizer: OptimizerState


def sample_windows(
    lengths: Sequence[int],
    window_length: int,
    batch_size: int,
    rng: np.random.Generator,
) -> List[Tuple[int, int, int]]:
    """
    Draw ``batch_size`` windows as (sequence index, start frame, frame count).

    Sequences shorter than the window contribute their full length.
    """
    windows = []
    for _ in range(batch_size):
        seq = int(rng.integers(len(lengths)))
        count = min(window_length, lengths[seq])
        start = int(rng.integers(lengths[seq] - count + 1))
        windows.append((seq, start, count))
    return windows


def train(
    params: ModelParams,
    dataset: Sequence[PoseSequence],
    config: TrainingConfig,
    checkpoint_dir: Optional[Union[str, Path]] = None,
) -> TrainingResult:
    """
    Optimize the model on randomly sampled windows.

    Per iteration: run every window of the batch through tracking, memory and
    refining, average the composite loss over the batch, backpropagate and
    apply one Adam step.

    Args:
        params: Initial parameters
        dataset: Sequences with frames and ground-truth absolute poses
        config: Training configuration
        checkpoint_dir: Where to save the final parameters (optional)

    Returns:
        TrainingResult with final parameters and the per-iteration loss history

    Raises:
        ValueError: If the dataset is empty or a sequence has fewer than 2 frames
        TrainingDivergedError: If the loss becomes non-finite
    """
    if not dataset:
        raise ValueError("train needs a non-empty dataset")
    lengths = [len(seq.frames) for seq in dataset]
    if min(lengths) < 2:
        raise ValueError("every training sequence needs at least 2 frames")

    frames = [[Tensor(f) for f in seq.frames] for seq in dataset]
    rng = np.random.default_rng(config.seed)
    optimizer = OptimizerState.from_config(config)
    rows = []

    logger.info(f"Training '{params.spec.preset}' for {config.iterations} iterations on "
                f"{len(dataset)} sequences (window {config.window_length}, batch {config.batch_size})")

    for iteration in range(config.iterations):
        lr = lr_at(iteration, config.base_lr, config.decay_every)
        leaves = params.as_leaves()

        losses = []
        for seq, start, count in sample_windows(lengths, config.window_length, config.batch_size, rng):
            window = frames[seq][start:start + count]
            gt = dataset[seq].absolute[start:start + count]
            outputs = run_window(window, leaves, config)
            losses.append(window_loss(outputs, gt, config.k))
        batch = mean_loss(losses)

        total = batch.total.item()
        if not np.isfinite(total):
            raise TrainingDivergedError(f"loss became {total} at iteration {iteration}")
        rows.append((iteration, batch.local.item(), batch.global_.item(), total))

        batch.total.backward()
        grads = {
            name: (t.grad.data if t.grad is not None else np.zeros(t.shape))
            for name, t in leaves.named_tensors()
        }
        values, optimizer = adam_step({name: t.data for name, t in params.named_tensors()},
                                      grads, optimizer, lr)
        params = params.replace({name: Tensor(v, name=name) for name, v in values.items()})

        if (iteration + 1) % config.log_every == 0 or iteration == 0:
            logger.info(f"iter {iteration:5d}  lr {lr:.2e}  loss {total:.6f}")

    history = pd.DataFrame(rows, columns=HISTORY_COLUMNS)
    history["iteration"] = history["iteration"].astype(np.int64)

    if checkpoint_dir is not None:
        save_checkpoint(params, checkpoint_dir, metadata={"config": config.model_dump(mode="json"),
                                                          "iterations": config.iterations})
    return TrainingResult(params, history, optimizer)

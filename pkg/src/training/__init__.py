"""Losses, optimizer, synthetic data, training loop and sliding-window inference."""

from .losses import LossConfig, loss_global, loss_local, loss_total, pose_error
from .optimizer import OptimizerState, adam_step, lr_at
from .synthetic import (
    SyntheticSequence,
    SyntheticSequenceSpec,
    make_synthetic_dataset,
    make_synthetic_sequence,
    square_footprint,
)
from .pipeline import WindowLoss, WindowOutputs, mean_loss, run_window, window_loss, window_targets
from .trainer import HISTORY_COLUMNS, TrainingResult, sample_windows, train
from .inference import (
    evaluate_endpoints,
    infer_trajectory,
    model_window_estimator,
    sliding_window_infer,
    window_starts,
)

__all__ = [
    "LossConfig",
    "loss_global",
    "loss_local",
    "loss_total",
    "pose_error",
    "OptimizerState",
    "adam_step",
    "lr_at",
    "SyntheticSequence",
    "SyntheticSequenceSpec",
    "make_synthetic_dataset",
    "make_synthetic_sequence",
    "square_footprint",
    "WindowLoss",
    "WindowOutputs",
    "mean_loss",
    "run_window",
    "window_loss",
    "window_targets",
    "HISTORY_COLUMNS",
    "TrainingResult",
    "sample_windows",
    "train",
    "evaluate_endpoints",
    "infer_trajectory",
    "model_window_estimator",
    "sliding_window_infer",
    "window_starts",
]

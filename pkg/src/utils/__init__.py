"""Utilities package for the adaptive-memory visual odometry pipeline."""

from .logger import setup_logger
from .config import (
    PROJECT_ROOT,
    DATA_DIR,
    SYNTHETIC_DATA_DIR,
    RUNS_DIR,
    TrainingConfig,
    desk_config,
    benchmark_config,
)
from .errors import (
    ShapeError,
    PoseFormatError,
    BlobFormatError,
    NonFiniteGradientError,
    TrainingDivergedError,
)

__all__ = [
    "setup_logger",
    "PROJECT_ROOT",
    "DATA_DIR",
    "SYNTHETIC_DATA_DIR",
    "RUNS_DIR",
    "TrainingConfig",
    "desk_config",
    "benchmark_config",
    "ShapeError",
    "PoseFormatError",
    "BlobFormatError",
    "NonFiniteGradientError",
    "TrainingDivergedError",
]

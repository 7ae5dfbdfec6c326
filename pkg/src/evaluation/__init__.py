"""Drift metrics, saliency maps, CSV export and figures."""

from .metrics import (
    KITTI_LENGTHS,
    DriftResult,
    associate,
    error_vs_speed,
    kitti_drift,
    last_frame_from_segment_length,
    segment_error,
    trajectory_distances,
    tum_rmse_drift,
)
from .saliency import saliency_map
from .export import export_csv, trajectory_table

__all__ = [
    "KITTI_LENGTHS",
    "DriftResult",
    "associate",
    "error_vs_speed",
    "kitti_drift",
    "last_frame_from_segment_length",
    "segment_error",
    "trajectory_distances",
    "tum_rmse_drift",
    "saliency_map",
    "export_csv",
    "trajectory_table",
]

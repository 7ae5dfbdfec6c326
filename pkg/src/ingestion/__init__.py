"""Trajectory text formats and sequence containers."""

from .pose_files import (
    Trajectory,
    parse_kitti_poses,
    parse_tum_trajectory,
    read_trajectory,
    write_kitti_poses,
    write_trajectory,
    write_tum_trajectory,
)
from .sequences import (
    SequenceManifest,
    SequenceRecord,
    load_dataset,
    read_sequence_container,
    write_dataset,
    write_sequence_container,
)

__all__ = [
    "Trajectory",
    "parse_kitti_poses",
    "parse_tum_trajectory",
    "read_trajectory",
    "write_kitti_poses",
    "write_trajectory",
    "write_tum_trajectory",
    "SequenceManifest",
    "SequenceRecord",
    "load_dataset",
    "read_sequence_container",
    "write_dataset",
    "write_sequence_container",
]

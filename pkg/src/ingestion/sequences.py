"""
Sequence containers on disk.

A container is a directory holding ``manifest.json``, one VOTB blob per
frame (``frame_000000.votb``, ...) and the ground-truth trajectory in KITTI
and TUM text formats. A dataset directory holds containers ``seq_000``,
``seq_001``, ... or is itself a single container.
"""

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Union

import numpy as np
from pydantic import BaseModel, Field, ValidationError

from src.geometry import PoseSE3
from src.tensor import read_blob, write_blob
from src.utils.errors import BlobFormatError
from src.utils.logger import setup_logger

from .pose_files import Trajectory, read_trajectory, write_trajectory

logger = setup_logger(__name__)

MANIFEST_NAME = "manifest.json"
CONTAINER_FORMAT = 1


class SequenceManifest(BaseModel):
    format_version: int = Field(CONTAINER_FORMAT)
    name: str = Field(..., description="Sequence name")
    frame_count: int = Field(..., ge=1)
    channels: int = Field(3, ge=1)
    height: int = Field(..., ge=1)
    width: int = Field(..., ge=1)
    frame_rate: float = Field(10.0, gt=0.0, description="Frames per second")
    frames: List[str] = Field(..., description="Frame blob files in stream order")
    poses: Dict[str, str] = Field(default_factory=dict, description="Trajectory files by format")


@dataclass(frozen=True)
class SequenceRecord:
    name: str
    frames: List[np.ndarray]
    absolute: List[PoseSE3]  # empty when the container has no ground truth
    timestamps: np.ndarray


def write_sequence_container(
    directory: Union[str, Path],
    frames: Sequence[np.ndarray],
    poses: Optional[Sequence[PoseSE3]] = None,
    name: Optional[str] = None,
    frame_rate: float = 10.0,
) -> Path:
    """
    Write frames and ground truth as a container directory.

    Returns:
        Path to the manifest
    """
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    if not frames:
        raise ValueError("a sequence container needs at least one frame")
    shape = np.shape(frames[0])
    if len(shape) != 3:
        raise ValueError(f"frames must be C x H x W, got {shape}")

    names = []
    for i, frame in enumerate(frames):
        if np.shape(frame) != shape:
            raise ValueError(f"frame {i} has shape {np.shape(frame)}, expected {shape}")
        names.append(f"frame_{i:06d}.votb")
        write_blob(directory / names[-1], np.asarray(frame, dtype=np.float64))

    pose_files = {}
    if poses is not None:
        if len(poses) != len(frames):
            raise ValueError(f"{len(poses)} poses for {len(frames)} frames")
        trajectory = Trajectory.from_poses(poses, frame_rate=frame_rate)
        pose_files = {"kitti": "poses_kitti.txt", "tum": "poses_tum.txt"}
        for fmt, file_name in pose_files.items():
            write_trajectory(directory / file_name, trajectory, fmt)

    manifest = SequenceManifest(
        name=name or directory.name,
        frame_count=len(frames),
        channels=shape[0],
        height=shape[1],
        width=shape[2],
        frame_rate=frame_rate,
        frames=names,
        poses=pose_files,
    )
    manifest_path = directory / MANIFEST_NAME
    manifest_path.write_text(json.dumps(manifest.model_dump(), indent=2, sort_keys=True) + "\n",
                             encoding="utf8")
    return manifest_path


def read_sequence_container(directory: Union[str, Path]) -> SequenceRecord:
    """
    Load a container written by :func:`write_sequence_container`.

    Raises:
        FileNotFoundError: If the manifest or a referenced file is missing
        BlobFormatError: If the manifest is invalid or frames disagree with it
    """
    directory = Path(directory)
    manifest_path = directory / MANIFEST_NAME
    if not manifest_path.exists():
        raise FileNotFoundError(f"Sequence manifest not found: {manifest_path}")
    try:
        manifest = SequenceManifest.model_validate_json(manifest_path.read_text(encoding="utf8"))
    except ValidationError as e:
        raise BlobFormatError(f"{manifest_path}: invalid manifest ({e.error_count()} errors)") from e
    if len(manifest.frames) != manifest.frame_count:
        raise BlobFormatError(f"{manifest_path}: lists {len(manifest.frames)} frames, "
                              f"frame_count is {manifest.frame_count}")

    expected = (manifest.channels, manifest.height, manifest.width)
    frames = []
    for file_name in manifest.frames:
        frame = read_blob(directory / file_name)
        if frame.shape != expected:
            raise BlobFormatError(f"{file_name}: shape {frame.shape}, manifest says {expected}")
        frames.append(frame)

    poses: List[PoseSE3] = []
    stamps = np.arange(manifest.frame_count) / manifest.frame_rate
    # KITTI text keeps the matrices exactly; TUM supplies the timestamps.
    if "tum" in manifest.poses:
        trajectory = read_trajectory(directory / manifest.poses["tum"], "tum")
        poses, stamps = trajectory.poses, trajectory.stamps
    if "kitti" in manifest.poses:
        poses = read_trajectory(directory / manifest.poses["kitti"], "kitti").poses
    if poses and len(poses) != manifest.frame_count:
        raise BlobFormatError(f"{directory}: {len(poses)} poses for {manifest.frame_count} frames")

    return SequenceRecord(manifest.name, frames, list(poses), np.asarray(stamps))


def write_dataset(directory: Union[str, Path], sequences: Sequence, frame_rate: float = 10.0) -> List[Path]:
    """Write sequences (with ``frames`` and ``absolute``) as ``seq_000``, ``seq_001``, ..."""
    directory = Path(directory)
    paths = []
    for i, seq in enumerate(sequences):
        name = f"seq_{i:03d}"
        paths.append(write_sequence_container(directory / name, seq.frames, seq.absolute,
                                              name=name, frame_rate=frame_rate))
    logger.info(f"Wrote {len(paths)} sequence containers to: {directory}")
    return paths


def load_dataset(directory: Union[str, Path]) -> List[SequenceRecord]:
    """Load every container of a dataset directory (or the directory itself)."""
    directory = Path(directory)
    if not directory.exists():
        raise FileNotFoundError(f"Dataset directory not found: {directory}")
    if (directory / MANIFEST_NAME).exists():
        return [read_sequence_container(directory)]
    containers = sorted(p for p in directory.iterdir() if (p / MANIFEST_NAME).exists())
    if not containers:
        raise FileNotFoundError(f"No sequence containers in: {directory}")
    records = [read_sequence_container(p) for p in containers]
    logger.info(f"Loaded {len(records)} sequences from: {directory}")
    return records

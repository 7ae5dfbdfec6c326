"""
KITTI and TUM trajectory text formats.

KITTI: one pose per line, 12 decimals = top three rows of the 4x4 pose,
row-major. TUM: ``timestamp tx ty tz qx qy qz qw`` per line, ``#`` comments.
"""

from dataclasses import dataclass
from pathlib import Path
from typing import List, Literal, Sequence, Union

import numpy as np

from src.geometry import PoseSE3, matrix_to_quat, quat_to_matrix
from src.geometry.rotations import nearest_rotation, orthonormality_error
from src.utils.errors import PoseFormatError
from src.utils.logger import setup_logger

logger = setup_logger(__name__)

TrajectoryFormat = Literal["kitti", "tum"]

REORTHONORMALIZE_ABOVE = 1e-12
WARN_ABOVE = 1e-3


@dataclass(frozen=True)
class Trajectory:
    """Poses keyed by strictly increasing frame indices or timestamps."""

    stamps: np.ndarray
    poses: List[PoseSE3]

    def __post_init__(self):
        stamps = np.asarray(self.stamps, dtype=np.float64).reshape(-1)
        if len(stamps) != len(self.poses):
            raise ValueError(f"{len(stamps)} stamps for {len(self.poses)} poses")
        if len(stamps) > 1 and np.any(np.diff(stamps) <= 0):
            raise ValueError("trajectory stamps must be strictly increasing")
        object.__setattr__(self, "stamps", stamps)

    @classmethod
    def from_poses(cls, poses: Sequence[PoseSE3], frame_rate: float = None) -> "Trajectory":
        """Frame-indexed trajectory; stamps are seconds when ``frame_rate`` is given."""
        stamps = np.arange(len(poses), dtype=np.float64)
        if frame_rate:
            stamps = stamps / frame_rate
        return cls(stamps, list(poses))

    def __len__(self) -> int:
        return len(self.poses)

    def positions(self) -> np.ndarray:
        return np.array([p.translation for p in self.poses]).reshape(-1, 3)


def _floats(tokens: List[str], line_number: int) -> np.ndarray:
    try:
        values = np.array([float(tok) for tok in tokens])
    except ValueError as e:
        raise PoseFormatError(f"not a number ({e})", line_number) from e
    if not np.all(np.isfinite(values)):
        raise PoseFormatError("non-finite value", line_number)
    return values


def parse_kitti_poses(text: str) -> Trajectory:
    """
    Parse KITTI pose lines.

    Rotation blocks deviating from orthonormality are projected back onto
    SO(3); a warning is logged when the deviation exceeds 1e-3.

    Raises:
        PoseFormatError: On a line without exactly 12 numbers or with a reflection
    """
    poses = []
    for line_number, line in enumerate(text.splitlines(), start=1):
        tokens = line.split()
        if not tokens:
            continue
        if len(tokens) != 12:
            raise PoseFormatError(f"expected 12 values, got {len(tokens)}", line_number)
        m = np.eye(4)
        m[:3, :4] = _floats(tokens, line_number).reshape(3, 4)
        R = m[:3, :3]
        if np.linalg.det(R) <= 0:
            raise PoseFormatError("rotation block is not a proper rotation", line_number)
        deviation = orthonormality_error(R)
        if deviation > REORTHONORMALIZE_ABOVE:
            if deviation > WARN_ABOVE:
                logger.warning(f"line {line_number}: rotation deviates by {deviation:.2e}, re-orthonormalized")
            m[:3, :3] = nearest_rotation(R)
        poses.append(PoseSE3(m))
    return Trajectory.from_poses(poses)


def write_kitti_poses(trajectory: Union[Trajectory, Sequence[PoseSE3]]) -> str:
    poses = trajectory.poses if isinstance(trajectory, Trajectory) else trajectory
    lines = [" ".join(f"{v:.17g}" for v in p.matrix[:3, :4].ravel()) for p in poses]
    return "".join(line + "\n" for line in lines)


def parse_tum_trajectory(text: str) -> Trajectory:
    """
    Parse TUM trajectory lines; quaternions are normalized on read.

    Raises:
        PoseFormatError: On a malformed line, zero quaternion or non-increasing timestamp
    """
    stamps, poses = [], []
    for line_number, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        tokens = stripped.replace(",", " ").split()
        if len(tokens) != 8:
            raise PoseFormatError(f"expected 8 values, got {len(tokens)}", line_number)
        values = _floats(tokens, line_number)
        stamp, t, q = values[0], values[1:4], values[4:8]
        norm = np.linalg.norm(q)
        if norm == 0.0:
            raise PoseFormatError("zero-norm quaternion", line_number)
        if abs(norm - 1.0) > WARN_ABOVE:
            logger.warning(f"line {line_number}: quaternion norm {norm:.6f}, normalized")
        if stamps and stamp <= stamps[-1]:
            raise PoseFormatError(f"timestamp {stamp} not after {stamps[-1]}", line_number)
        stamps.append(stamp)
        poses.append(PoseSE3.from_rt(quat_to_matrix(q / norm), t))
    return Trajectory(np.array(stamps), poses)


def write_tum_trajectory(trajectory: Trajectory) -> str:
    lines = ["# timestamp tx ty tz qx qy qz qw"]
    for stamp, pose in zip(trajectory.stamps, trajectory.poses):
        values = [stamp, *pose.translation, *matrix_to_quat(pose.rotation)]
        lines.append(" ".join(f"{v:.17g}" for v in values))
    return "".join(line + "\n" for line in lines)


def read_trajectory(path: Union[str, Path], fmt: TrajectoryFormat) -> Trajectory:
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"Trajectory file not found: {path}")
    text = path.read_text(encoding="utf8")
    try:
        return parse_kitti_poses(text) if fmt == "kitti" else parse_tum_trajectory(text)
    except PoseFormatError as e:
        error = PoseFormatError(f"{path}: {e}")
        error.line_number = e.line_number
        raise error from e


def write_trajectory(path: Union[str, Path], trajectory: Trajectory, fmt: TrajectoryFormat) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    text = write_kitti_poses(trajectory) if fmt == "kitti" else write_tum_trajectory(trajectory)
    path.write_text(text, encoding="utf8")
    return path

"""
Trajectory drift metrics.

``kitti_drift`` follows the odometry benchmark: relative errors of all
subsegments of given path lengths, normalized by the length.
``tum_rmse_drift`` is the translational RMSE of one-second relative motions
after similarity alignment, in m/s.
"""

from dataclasses import dataclass
from typing import List, Literal, Sequence, Tuple

import numpy as np
import pandas as pd

from src.geometry import PoseSE3, rotation_angle, umeyama_align
from src.geometry.alignment import DEGENERATE_EPS
from src.ingestion.pose_files import Trajectory
from src.utils.logger import setup_logger

logger = setup_logger(__name__)

KITTI_LENGTHS = (100.0, 200.0, 300.0, 400.0, 500.0, 600.0, 700.0, 800.0)
SEGMENT_COLUMNS = ["first_frame", "length", "t_err", "r_err", "speed"]
LENGTH_COLUMNS = ["length", "t_rel", "r_rel", "segments"]
SPEED_COLUMNS = ["speed", "t_rel", "r_rel", "segments"]

Aggregate = Literal["mean", "rmse"]
Alignment = Literal["sim3", "se3", "none"]


@dataclass(frozen=True)
class DriftResult:
    t_rel: float  # percent
    r_rel: float  # degrees per 100 m
    per_length: pd.DataFrame
    segments: pd.DataFrame


def trajectory_distances(poses: Sequence[PoseSE3]) -> np.ndarray:
    """Cumulative path length at every frame."""
    positions = np.array([p.translation for p in poses]).reshape(-1, 3)
    steps = np.linalg.norm(np.diff(positions, axis=0), axis=1)
    return np.concatenate([[0.0], np.cumsum(steps)])


def last_frame_from_segment_length(dist: np.ndarray, first_frame: int, length: float) -> int:
    """First frame whose path length from ``first_frame`` is >= length, or -1."""
    target = dist[first_frame] + length
    idx = int(np.searchsorted(dist, target, side="left"))
    if idx < first_frame:
        idx = first_frame
    return idx if idx < len(dist) else -1


def segment_error(gt_first: PoseSE3, gt_last: PoseSE3, est_first: PoseSE3, est_last: PoseSE3) -> Tuple[float, float]:
    """(translation, rotation angle) of inv(delta_gt) @ delta_est."""
    delta_gt = gt_first.inverse().matrix @ gt_last.matrix
    delta_est = est_first.inverse().matrix @ est_last.matrix
    error = np.linalg.inv(delta_gt) @ delta_est
    return float(np.linalg.norm(error[:3, 3])), rotation_angle(error[:3, :3])


def _aggregate(values: np.ndarray, how: Aggregate) -> float:
    if len(values) == 0:
        return float("nan")
    if how == "rmse":
        return float(np.sqrt(np.mean(values ** 2)))
    return float(np.mean(values))


def _poses(trajectory) -> List[PoseSE3]:
    return list(trajectory.poses) if isinstance(trajectory, Trajectory) else list(trajectory)


def kitti_drift(
    est,
    gt,
    lengths: Sequence[float] = KITTI_LENGTHS,
    step: int = 1,
    aggregate: Aggregate = "mean",
    frame_rate: float = 10.0,
) -> DriftResult:
    """
    Average translational (%) and rotational (deg/100 m) drift.

    Args:
        est: Estimated trajectory (Trajectory or list of PoseSE3)
        gt: Ground truth, same frame indexing
        lengths: Subsegment path lengths (m)
        step: Spacing of start frames
        aggregate: ``mean`` over all subsegments, or ``rmse``
        frame_rate: Frames per second, for the subsegment speed

    Returns:
        DriftResult; NaN drifts and empty tables when no subsegment fits

    Raises:
        ValueError: If the trajectories differ in length or a length is not positive
    """
    est_poses, gt_poses = _poses(est), _poses(gt)
    if len(est_poses) != len(gt_poses):
        raise ValueError(f"trajectory lengths differ: {len(est_poses)} vs {len(gt_poses)}")
    if step < 1:
        raise ValueError(f"step must be >= 1, got {step}")
    if any(not length > 0 for length in lengths):
        raise ValueError(f"subsegment lengths must be positive, got {list(lengths)}")

    rows = []
    if gt_poses:
        dist = trajectory_distances(gt_poses)
        for first in range(0, len(gt_poses), step):
            for length in lengths:
                last = last_frame_from_segment_length(dist, first, length)
                if last == -1:
                    continue
                t_err, r_err = segment_error(gt_poses[first], gt_poses[last], est_poses[first], est_poses[last])
                num_frames = last - first + 1
                speed = length / (num_frames / frame_rate)
                rows.append((first, float(length), t_err / length, r_err / length, speed))
    segments = pd.DataFrame(rows, columns=SEGMENT_COLUMNS)
    segments["first_frame"] = segments["first_frame"].astype(np.int64)

    if segments.empty:
        logger.warning(f"No subsegment of lengths {list(lengths)} fits a {len(gt_poses)}-frame trajectory")

    per_length = pd.DataFrame(
        [
            (float(length), _aggregate(group["t_err"].to_numpy(), aggregate) * 100.0,
             _aggregate(group["r_err"].to_numpy(), aggregate) * 180.0 / np.pi * 100.0, len(group))
            for length, group in segments.groupby("length", sort=True)
        ],
        columns=LENGTH_COLUMNS,
    )
    t_rel = _aggregate(segments["t_err"].to_numpy(), aggregate) * 100.0
    r_rel = _aggregate(segments["r_err"].to_numpy(), aggregate) * 180.0 / np.pi * 100.0
    return DriftResult(t_rel, r_rel, per_length, segments)


def error_vs_speed(segments: pd.DataFrame, bins: int = 8, aggregate: Aggregate = "mean") -> pd.DataFrame:
    """Drift grouped into equal-width speed bins (bin centers in m/s)."""
    if segments.empty:
        return pd.DataFrame(columns=SPEED_COLUMNS)
    speeds = segments["speed"].to_numpy()
    lo, hi = float(speeds.min()), float(speeds.max())
    if hi <= lo:
        hi = lo + 1.0
    edges = np.linspace(lo, hi, bins + 1)
    index = np.clip(np.digitize(speeds, edges) - 1, 0, bins - 1)
    rows = []
    for b in range(bins):
        mask = index == b
        if not np.any(mask):
            continue
        group = segments[mask]
        rows.append((0.5 * (edges[b] + edges[b + 1]),
                     _aggregate(group["t_err"].to_numpy(), aggregate) * 100.0,
                     _aggregate(group["r_err"].to_numpy(), aggregate) * 180.0 / np.pi * 100.0,
                     int(mask.sum())))
    return pd.DataFrame(rows, columns=SPEED_COLUMNS)


def associate(est_stamps: np.ndarray, gt_stamps: np.ndarray, max_difference: float = 0.02) -> List[Tuple[int, int]]:
    """
    Greedy one-to-one timestamp matching, closest pairs first.

    Returns:
        (est index, gt index) pairs sorted by est index
    """
    est_stamps = np.asarray(est_stamps, dtype=np.float64)
    gt_stamps = np.asarray(gt_stamps, dtype=np.float64)
    candidates = []
    for i, t in enumerate(est_stamps):
        lo = np.searchsorted(gt_stamps, t - max_difference, side="left")
        hi = np.searchsorted(gt_stamps, t + max_difference, side="right")
        for j in range(lo, hi):
            diff = abs(t - gt_stamps[j])
            if diff <= max_difference:
                candidates.append((diff, i, j))
    candidates.sort()

    used_est, used_gt, matches = set(), set(), []
    for _, i, j in candidates:
        if i in used_est or j in used_gt:
            continue
        used_est.add(i)
        used_gt.add(j)
        matches.append((i, j))
    return sorted(matches)


def _align_poses(est: List[PoseSE3], gt: List[PoseSE3], alignment: Alignment) -> List[PoseSE3]:
    if alignment == "none":
        return est
    est_xyz = np.array([p.translation for p in est])
    gt_xyz = np.array([p.translation for p in gt])
    spread = float(((est_xyz - est_xyz.mean(axis=0)) ** 2).sum()) / len(est_xyz)
    if spread <= DEGENERATE_EPS:
        # stationary estimate: only the offset is observable
        logger.warning("Estimated positions coincide; aligning by translation only")
        scale, R, t = 1.0, np.eye(3), gt_xyz.mean(axis=0) - est_xyz.mean(axis=0)
    else:
        scale, R, t = umeyama_align(est_xyz, gt_xyz, with_scale=(alignment == "sim3"))
    return [PoseSE3.from_rt(R @ p.rotation, scale * R @ p.translation + t) for p in est]


def tum_rmse_drift(
    est: Trajectory,
    gt: Trajectory,
    alignment: Alignment = "sim3",
    max_difference: float = 0.02,
    delta: float = 1.0,
) -> float:
    """
    Translational RMSE of relative motions ``delta`` seconds apart, in m/s.

    Args:
        est: Estimated trajectory with timestamps
        gt: Ground truth with timestamps
        alignment: ``sim3`` (Umeyama with scale), ``se3`` or ``none``
        max_difference: Association tolerance (s)
        delta: Time between the poses of a pair (s)

    Raises:
        ValueError: If no poses can be associated or no pair is ``delta`` apart
    """
    matches = associate(est.stamps, gt.stamps, max_difference)
    if not matches:
        raise ValueError("no associable poses between the two trajectories")
    if alignment not in ("sim3", "se3", "none"):
        raise ValueError(f"unknown alignment '{alignment}'")
    est_m = [est.poses[i] for i, _ in matches]
    gt_m = [gt.poses[j] for _, j in matches]
    stamps = np.array([gt.stamps[j] for _, j in matches])
    est_m = _align_poses(est_m, gt_m, alignment) if len(matches) > 1 else est_m

    errors = []
    for i, t in enumerate(stamps):
        j = int(np.searchsorted(stamps, t + delta))
        best = None
        for k in (j - 1, j):
            if i < k < len(stamps) and abs(stamps[k] - t - delta) <= max_difference:
                if best is None or abs(stamps[k] - t - delta) < abs(stamps[best] - t - delta):
                    best = k
        if best is None:
            continue
        t_err, _ = segment_error(gt_m[i], gt_m[best], est_m[i], est_m[best])
        errors.append(t_err / (stamps[best] - t))
    if not errors:
        raise ValueError(f"no associated pose pairs {delta} s apart")
    return float(np.sqrt(np.mean(np.square(errors))))

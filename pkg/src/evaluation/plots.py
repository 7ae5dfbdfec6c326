"""PNG figures of drift tables and trajectories (non-interactive backend)."""

from pathlib import Path
from typing import Sequence, Union

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402
import pandas as pd  # noqa: E402

from src.geometry import PoseSE3, apply_similarity, umeyama_align  # noqa: E402
from src.utils.logger import setup_logger  # noqa: E402

logger = setup_logger(__name__)


def plot_drift_table(table: pd.DataFrame, x_column: str, path: Union[str, Path], x_label: str) -> Path:
    """Two panels: translational (%) and rotational (deg/100 m) drift over ``x_column``."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig, (ax_t, ax_r) = plt.subplots(1, 2, figsize=(9, 3.5))
    ax_t.plot(table[x_column], table["t_rel"], marker="o")
    ax_t.set_xlabel(x_label)
    ax_t.set_ylabel("Translation error (%)")
    ax_r.plot(table[x_column], table["r_rel"], marker="o", color="tab:orange")
    ax_r.set_xlabel(x_label)
    ax_r.set_ylabel("Rotation error (deg/100m)")
    for ax in (ax_t, ax_r):
        ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    logger.info(f"Saved figure: {path}")
    return path


def plot_trajectories(est: Sequence[PoseSE3], gt: Sequence[PoseSE3], path: Union[str, Path],
                      align: bool = True) -> Path:
    """Top-down (x, y) view of an estimate against ground truth."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    est_xyz = np.array([p.translation for p in est])
    gt_xyz = np.array([p.translation for p in gt])
    if align and len(est_xyz) == len(gt_xyz) and len(est_xyz) > 1:
        try:
            est_xyz = apply_similarity(est_xyz, *umeyama_align(est_xyz, gt_xyz, with_scale=True))
        except ValueError as e:
            logger.warning(f"Skipping alignment: {e}")

    fig, ax = plt.subplots(figsize=(5, 5))
    ax.plot(gt_xyz[:, 0], gt_xyz[:, 1], label="ground truth", color="black")
    ax.plot(est_xyz[:, 0], est_xyz[:, 1], label="estimate", color="tab:blue", linestyle="--")
    ax.set_xlabel("x (m)")
    ax.set_ylabel("y (m)")
    ax.set_aspect("equal", adjustable="datalim")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    logger.info(f"Saved figure: {path}")
    return path

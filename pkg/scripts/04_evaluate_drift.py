"""Script to compute drift tables and figures for every inferred trajectory."""

import sys
from pathlib import Path

# Add src to path
sys.path.insert(0, str(Path(__file__).parent.parent))

import pandas as pd

from src.evaluation import error_vs_speed, export_csv, kitti_drift
from src.evaluation.plots import plot_drift_table, plot_trajectories
from src.ingestion import load_dataset, read_trajectory
from src.utils import RUNS_DIR, SYNTHETIC_DATA_DIR

# Desk-scale subsegment lengths (m)
LENGTHS = [0.1, 0.2, 0.3, 0.4, 0.5]


def main():
    """Evaluate each run against the synthetic test ground truth."""
    dataset = {r.name: r for r in load_dataset(SYNTHETIC_DATA_DIR / "test")}
    estimates = sorted(RUNS_DIR.glob("*/trajectories/*.txt"))
    if not estimates:
        print(f"No trajectories found under {RUNS_DIR}")
        return

    print(f"Found {len(estimates)} trajectory file(s)")
    print("=" * 60)

    rows = []
    for est_path in estimates:
        run_name = est_path.parent.parent.name
        print(f"\nEvaluating: {run_name}/{est_path.name}")
        try:
            est = read_trajectory(est_path, "kitti")
            gt = dataset[est_path.stem].absolute
            drift = kitti_drift(est, gt, lengths=LENGTHS)
            out_dir = est_path.parent.parent / "evaluation" / est_path.stem
            export_csv(drift.per_length, out_dir / "error_vs_length.csv")
            by_speed = error_vs_speed(drift.segments)
            export_csv(by_speed, out_dir / "error_vs_speed.csv")
            if not drift.per_length.empty:
                plot_drift_table(drift.per_length, "length", out_dir / "error_vs_length.png", "Path length (m)")
                plot_drift_table(by_speed, "speed", out_dir / "error_vs_speed.png", "Speed (m/s)")
            plot_trajectories(est.poses, gt, out_dir / "trajectory.png")
            rows.append((run_name, est_path.stem, drift.t_rel, drift.r_rel))
            print(f"✓ t_rel {drift.t_rel:.2f} %  r_rel {drift.r_rel:.2f} deg/100m")
        except Exception as e:
            print(f"✗ Error: {e}")

    summary = pd.DataFrame(rows, columns=["run", "sequence", "t_rel", "r_rel"])
    export_csv(summary, RUNS_DIR / "drift_summary.csv")
    print("\n" + "=" * 60)
    print(summary.to_string(index=False))


if __name__ == "__main__":
    main()

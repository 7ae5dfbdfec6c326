"""Script to estimate test trajectories with every trained run."""

import sys
from pathlib import Path

# Add src to path
sys.path.insert(0, str(Path(__file__).parent.parent))

from src.ingestion import Trajectory, load_dataset, write_trajectory
from src.model import load_checkpoint
from src.training import evaluate_endpoints, infer_trajectory
from src.utils import RUNS_DIR, SYNTHETIC_DATA_DIR, TrainingConfig


def main():
    """Write one KITTI-format trajectory per run and test sequence."""
    runs = sorted(p for p in RUNS_DIR.glob("*") if (p / "checkpoint").exists())
    if not runs:
        print(f"No trained runs found in {RUNS_DIR}")
        return

    dataset = load_dataset(SYNTHETIC_DATA_DIR / "test")
    print(f"Found {len(runs)} run(s), {len(dataset)} test sequence(s)")
    print("=" * 60)

    for run_dir in runs:
        print(f"\nInferring: {run_dir.name}")
        try:
            params = load_checkpoint(run_dir / "checkpoint")
            config = TrainingConfig.from_json_file(run_dir / "config.json")
            for record in dataset:
                poses = infer_trajectory(params, record.frames, config)
                path = write_trajectory(run_dir / "trajectories" / f"{record.name}.txt",
                                        Trajectory(record.timestamps, poses), "kitti")
                errors = evaluate_endpoints(params, record.frames, record.absolute, config)
                print(f"✓ {path.name}: endpoint error {errors['refined_endpoint_error']:.4f} m "
                      f"(tracking only {errors['tracking_endpoint_error']:.4f} m)")
        except Exception as e:
            print(f"✗ Error: {e}")

    print("\n" + "=" * 60)
    print("Inference complete!")


if __name__ == "__main__":
    main()

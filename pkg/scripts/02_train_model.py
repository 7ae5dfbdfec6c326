"""Script to train the refined model and the tracking-only baseline."""

import sys
from pathlib import Path

# Add src to path
sys.path.insert(0, str(Path(__file__).parent.parent))

from src.evaluation import export_csv
from src.ingestion import load_dataset
from src.model import NetworkSpec, init_params
from src.training import train
from src.utils import RUNS_DIR, SYNTHETIC_DATA_DIR, desk_config


def main():
    """Train both variants on the synthetic training set."""
    data_dir = SYNTHETIC_DATA_DIR / "train"
    if not data_dir.exists():
        print(f"No training data found in {data_dir}; run 01_make_synthetic_data.py first")
        return

    dataset = load_dataset(data_dir)
    print(f"Found {len(dataset)} training sequence(s)")
    print("=" * 60)

    base = desk_config()
    for run_name, use_refining in (("refined", True), ("tracking_only", False)):
        print(f"\nTraining: {run_name}")
        config = base.with_overrides(use_refining=use_refining)
        out_dir = RUNS_DIR / run_name
        try:
            params = init_params(NetworkSpec.from_preset(config.preset), seed=config.seed)
            result = train(params, dataset, config, checkpoint_dir=out_dir / "checkpoint")
            export_csv(result.history, out_dir / "loss_history.csv")
            (out_dir / "config.json").write_text(config.dump_json() + "\n", encoding="utf8")
            first, last = result.history["loss_total"].iloc[[0, -1]]
            print(f"✓ Loss {first:.4f} -> {last:.4f}")
        except Exception as e:
            print(f"✗ Error: {e}")

    print("\n" + "=" * 60)
    print(f"Checkpoints stored in: {RUNS_DIR}")


if __name__ == "__main__":
    main()

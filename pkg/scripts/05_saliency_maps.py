"""Script to compute saliency maps on the single-square sequence."""

import sys
from pathlib import Path

# Add src to path
sys.path.insert(0, str(Path(__file__).parent.parent))

from src.evaluation import saliency_map
from src.ingestion import load_dataset
from src.model import load_checkpoint
from src.tensor import write_blob
from src.utils import RUNS_DIR, SYNTHETIC_DATA_DIR, TrainingConfig


def main():
    """Write per-frame saliency blobs for each trained run."""
    runs = sorted(p for p in RUNS_DIR.glob("*") if (p / "checkpoint").exists())
    if not runs:
        print(f"No trained runs found in {RUNS_DIR}")
        return

    record = load_dataset(SYNTHETIC_DATA_DIR / "square")[0]
    print(f"Found {len(runs)} run(s); square sequence of {len(record.frames)} frames")
    print("=" * 60)

    for run_dir in runs:
        print(f"\nSaliency: {run_dir.name}")
        try:
            params = load_checkpoint(run_dir / "checkpoint")
            config = TrainingConfig.from_json_file(run_dir / "config.json")
            frames = record.frames[:config.window_length]
            maps = saliency_map(params, frames, len(frames) - 1, config)
            for i, values in enumerate(maps):
                write_blob(run_dir / "saliency" / f"saliency_{i:06d}.votb", values)
            print(f"✓ {len(maps)} maps, peak {maps.max():.3e}")
        except Exception as e:
            print(f"✗ Error: {e}")

    print("\n" + "=" * 60)
    print("Saliency complete!")


if __name__ == "__main__":
    main()

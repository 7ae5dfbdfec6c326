"""Script to render the synthetic desk-scale datasets."""

import sys
from pathlib import Path

# Add src to path
sys.path.insert(0, str(Path(__file__).parent.parent))

from src.ingestion import write_dataset
from src.training import SyntheticSequenceSpec, make_synthetic_dataset
from src.utils import SYNTHETIC_DATA_DIR


# Blob texture for training, single square for saliency experiments
DATASETS = {
    "train": SyntheticSequenceSpec(frame_count=40, sequence_count=4, motion_jitter=0.2, seed=0),
    "test": SyntheticSequenceSpec(frame_count=60, sequence_count=1, motion_jitter=0.2, seed=100),
    "square": SyntheticSequenceSpec(frame_count=11, pattern="square", seed=7),
}


def main():
    """Render every dataset under the synthetic data directory."""
    print(f"Rendering {len(DATASETS)} dataset(s) into {SYNTHETIC_DATA_DIR}")
    print("=" * 60)

    for name, spec in DATASETS.items():
        print(f"\nRendering: {name}")
        out_dir = SYNTHETIC_DATA_DIR / name
        try:
            sequences = make_synthetic_dataset(spec)
            write_dataset(out_dir, sequences, frame_rate=spec.frame_rate)
            (out_dir / "spec.json").write_text(spec.dump_json() + "\n", encoding="utf8")
            print(f"✓ {len(sequences)} sequence(s) of {spec.frame_count} frames")
        except Exception as e:
            print(f"✗ Error: {e}")

    print("\n" + "=" * 60)
    print("Synthetic data complete!")


if __name__ == "__main__":
    main()

import json
from functools import lru_cache
from pathlib import Path
from typing import Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

# Project root
PROJECT_ROOT = Path(__file__).parent.parent.parent

# Data directories
DATA_DIR = PROJECT_ROOT / "data"
SYNTHETIC_DATA_DIR = DATA_DIR / "synthetic"
RUNS_DIR = PROJECT_ROOT / "runs"

PresetName = Literal["tiny", "desk", "kitti-shape"]


class TrainingConfig(BaseModel):
    """One flat run configuration; experiments are reproducible from it alone."""

    model_config = ConfigDict(extra="forbid")

    preset: PresetName = Field("desk", description="Encoder/network size preset")
    window_length: int = Field(11, ge=2, description="Frames per training/inference window")
    batch_size: int = Field(4, ge=1, description="Windows per optimizer step")
    iterations: int = Field(500, ge=0, description="Optimizer steps")
    base_lr: float = Field(1e-3, ge=0.0, description="Initial learning rate")
    decay_every: int = Field(60000, ge=1, description="Iterations between learning-rate halvings")
    weight_decay: float = Field(4e-4, ge=0.0, description="Decoupled weight decay")
    beta1: float = Field(0.9, ge=0.0, lt=1.0)
    beta2: float = Field(0.99, ge=0.0, lt=1.0)
    eps: float = Field(1e-8, gt=0.0)
    k: float = Field(100.0, gt=0.0, description="Rotation-balance weight of the pose losses")
    theta_rot: float = Field(0.005, ge=0.0, description="Rotational storage threshold (rad)")
    theta_trans: float = Field(0.6, ge=0.0, description="Translational storage threshold (m)")
    memory_size: Optional[int] = Field(None, ge=1, description="Memory slots; defaults to window_length")
    memory_rule: Literal["or", "and"] = Field("or", description="How the two motion tests combine")
    detach_memory: bool = Field(True, description="Stop gradients at stored hidden states")
    use_refining: bool = Field(True, description="False gives the tracking-only baseline")
    use_temporal_attention: bool = Field(True)
    use_spatial_attention: bool = Field(True)
    loss_aggregation: Literal["mean"] = Field("mean", description="Batch loss reduction")
    seed: int = Field(0, description="Seed for initialization and window sampling")
    log_every: int = Field(25, ge=1)

    @model_validator(mode="after")
    def _fill_memory_size(self):
        if self.memory_size is None:
            self.memory_size = self.window_length
        return self

    @classmethod
    def from_json_file(cls, path) -> "TrainingConfig":
        """Load and validate a config file."""
        path = Path(path)
        if not path.exists():
            raise FileNotFoundError(f"Config file not found: {path}")
        return cls.model_validate_json(path.read_text(encoding="utf8"))

    def with_overrides(self, **overrides) -> "TrainingConfig":
        """Return a validated copy with the non-None overrides applied."""
        updates = {k: v for k, v in overrides.items() if v is not None}
        if not updates:
            return self
        merged = self.model_dump()
        merged.update(updates)
        if "window_length" in updates and "memory_size" not in updates:
            merged["memory_size"] = None
        return TrainingConfig.model_validate(merged)

    def dump_json(self) -> str:
        return json.dumps(self.model_dump(), indent=2, sort_keys=True)


# Hyper-parameters reported for the two benchmark datasets.
_BENCHMARK_SETTINGS = {
    "kitti": dict(k=100.0, theta_rot=0.005, theta_trans=0.6, window_length=11,
                  memory_size=11, batch_size=4, base_lr=1e-4, decay_every=60000,
                  iterations=150000, weight_decay=4e-4, beta1=0.9, beta2=0.99,
                  preset="kitti-shape"),
    "tum": dict(k=1.0, theta_rot=0.01, theta_trans=0.01, window_length=11,
                memory_size=11, batch_size=4, base_lr=1e-4, decay_every=60000,
                iterations=150000, weight_decay=4e-4, beta1=0.9, beta2=0.99,
                preset="kitti-shape"),
}


@lru_cache()
def benchmark_config(dataset: Literal["kitti", "tum"]) -> TrainingConfig:
    """Full-scale settings for a benchmark dataset."""
    if dataset not in _BENCHMARK_SETTINGS:
        raise ValueError(f"Unknown dataset preset: {dataset}")
    return TrainingConfig(**_BENCHMARK_SETTINGS[dataset])


@lru_cache()
def desk_config() -> TrainingConfig:
    """Defaults for desk-scale synthetic experiments."""
    return TrainingConfig(preset="desk", window_length=11, batch_size=4, base_lr=1e-3,
                          decay_every=200, iterations=500, k=100.0,
                          theta_rot=0.005, theta_trans=0.05)

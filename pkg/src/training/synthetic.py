"""
Synthetic desk-scale sequences: a textured plane seen by a downward-looking
camera that translates in its image plane and rotates about its optical axis.

Rendering is analytic: every pixel is a point on the camera plane, mapped
through the camera pose into world coordinates where the texture is
evaluated, so frames and ground-truth poses are consistent by construction.
"""

import json
from dataclasses import dataclass
from pathlib import Path
from typing import List, Literal, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from src.geometry import Pose6DoF, PoseSE3, integrate_relative
from src.utils.logger import setup_logger

logger = setup_logger(__name__)


class SyntheticSequenceSpec(BaseModel):
    """Parameters of a synthetic dataset; deterministic given ``seed``."""

    model_config = ConfigDict(extra="forbid")

    frame_count: int = Field(11, ge=2, description="Frames per sequence")
    height: int = Field(64, ge=4)
    width: int = Field(64, ge=4)
    pattern: Literal["blobs", "square"] = Field("blobs", description="Texture kind")
    translation_step: Tuple[float, float] = Field((0.01, 0.0), description="Camera motion per frame along x, y (m)")
    rotation_step: float = Field(0.0, description="Rotation per frame about the optical axis (rad)")
    motion_jitter: float = Field(0.0, ge=0.0, description="Relative std of per-frame motion perturbation")
    noise_level: float = Field(0.0, ge=0.0, description="Std of additive pixel noise")
    meters_per_pixel: float = Field(0.01, gt=0.0)
    blob_count: int = Field(12, ge=1)
    square_size: int = Field(12, ge=1, description="Square side in pixels")
    seed: int = Field(0)
    sequence_count: int = Field(1, ge=1)
    frame_rate: float = Field(10.0, gt=0.0, description="Frames per second, used for timestamps")

    @classmethod
    def from_json_file(cls, path) -> "SyntheticSequenceSpec":
        path = Path(path)
        if not path.exists():
            raise FileNotFoundError(f"Sequence spec not found: {path}")
        return cls.model_validate_json(path.read_text(encoding="utf8"))

    def dump_json(self) -> str:
        return json.dumps(self.model_dump(mode="json"), indent=2, sort_keys=True)


@dataclass(frozen=True)
class SyntheticSequence:
    frames: List[np.ndarray]  # (frame_count) x 3 x H x W
    relative: List[Pose6DoF]  # frame_count - 1
    absolute: List[PoseSE3]  # frame_count, absolute[0] = identity
    timestamps: np.ndarray  # seconds


class PlaneTexture:
    """RGB intensity field over world (x, y) coordinates."""

    def __init__(self, spec: SyntheticSequenceSpec, rng: np.random.Generator):
        self.pattern = spec.pattern
        mpp = spec.meters_per_pixel
        if self.pattern == "square":
            half = 0.5 * spec.square_size * mpp
            self.square = (-half, half)
            self.color = rng.uniform(0.5, 1.0, size=3)
            return

        travel = (spec.frame_count - 1) * (np.hypot(*spec.translation_step) * (1.0 + 3.0 * spec.motion_jitter))
        extent = 0.5 * np.hypot(spec.height, spec.width) * mpp + travel
        self.centers = rng.uniform(-extent, extent, size=(spec.blob_count, 2))
        self.sigmas = rng.uniform(3.0, 8.0, size=spec.blob_count) * mpp
        self.colors = rng.uniform(0.2, 1.0, size=(spec.blob_count, 3))

    def sample(self, xy: np.ndarray) -> np.ndarray:
        """Texture at points ``(..., 2)`` -> ``(3, ...)``."""
        if self.pattern == "square":
            lo, hi = self.square
            inside = np.all((xy >= lo) & (xy < hi), axis=-1).astype(np.float64)
            return self.color.reshape((3,) + (1,) * inside.ndim) * inside
        d2 = np.sum((xy[None] - self.centers.reshape((-1,) + (1,) * (xy.ndim - 1) + (2,))) ** 2, axis=-1)
        weights = np.exp(-0.5 * d2 / self.sigmas.reshape((-1,) + (1,) * (xy.ndim - 1)) ** 2)
        return np.tensordot(self.colors.T, weights, axes=([1], [0]))


def _camera_plane(spec: SyntheticSequenceSpec) -> np.ndarray:
    """Metric (x, y) of every pixel center in the camera frame, ``H x W x 2``."""
    rows = (np.arange(spec.height) - 0.5 * (spec.height - 1)) * spec.meters_per_pixel
    cols = (np.arange(spec.width) - 0.5 * (spec.width - 1)) * spec.meters_per_pixel
    yy, xx = np.meshgrid(rows, cols, indexing="ij")
    return np.stack([xx, yy], axis=-1)


def render_frame(texture: PlaneTexture, pose: PoseSE3, plane: np.ndarray) -> np.ndarray:
    """Image of the texture seen from ``pose`` (camera-to-world)."""
    R, t = pose.rotation, pose.translation
    world = plane @ R[:2, :2].T + t[:2]
    return texture.sample(world)


def _relative_motion(spec: SyntheticSequenceSpec, rng: np.random.Generator) -> List[Pose6DoF]:
    dx, dy = spec.translation_step
    steps = []
    for _ in range(spec.frame_count - 1):
        jitter = 1.0 + spec.motion_jitter * rng.standard_normal(3) if spec.motion_jitter > 0 else np.ones(3)
        steps.append(Pose6DoF([dx * jitter[0], dy * jitter[1], 0.0], [0.0, 0.0, spec.rotation_step * jitter[2]]))
    return steps


def make_synthetic_sequence(spec: SyntheticSequenceSpec, index: int = 0) -> SyntheticSequence:
    """
    Render one sequence of a dataset.

    Args:
        spec: Dataset parameters
        index: Sequence number; sequence ``i`` is seeded with ``seed + i``

    Returns:
        SyntheticSequence with frames, ground-truth relative and absolute poses
    """
    rng = np.random.default_rng(spec.seed + index)
    texture = PlaneTexture(spec, rng)
    relative = _relative_motion(spec, rng)
    absolute = integrate_relative(relative)
    plane = _camera_plane(spec)

    frames = []
    for pose in absolute:
        frame = render_frame(texture, pose, plane)
        if spec.noise_level > 0:
            frame = frame + spec.noise_level * rng.standard_normal(frame.shape)
        frames.append(frame)

    timestamps = np.arange(spec.frame_count) / spec.frame_rate
    return SyntheticSequence(frames, relative, absolute, timestamps)


def make_synthetic_dataset(spec: SyntheticSequenceSpec) -> List[SyntheticSequence]:
    sequences = [make_synthetic_sequence(spec, i) for i in range(spec.sequence_count)]
    logger.info(f"Rendered {len(sequences)} synthetic sequences of {spec.frame_count} "
                f"{spec.height}x{spec.width} frames ({spec.pattern})")
    return sequences


def square_footprint(spec: SyntheticSequenceSpec, pose: PoseSE3) -> np.ndarray:
    """Boolean ``H x W`` mask of the pixels covering the square pattern."""
    if spec.pattern != "square":
        raise ValueError("square_footprint needs the 'square' pattern")
    texture = PlaneTexture(spec, np.random.default_rng(0))
    return render_frame(texture, pose, _camera_plane(spec))[0] > 0

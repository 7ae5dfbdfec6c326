"""Tracking pass: encoder -> ConvLSTM -> SE(3) head over a frame sequence."""

from dataclasses import dataclass
from typing import List, Sequence

from src.geometry import Pose6DoF
from src.tensor import Tensor

from .convlstm import TrackingState, convlstm_step
from .encoder import encode_pair
from .params import ModelParams
from .se3_head import se3_head, to_pose


@dataclass(frozen=True)
class TrackingResult:
    """Per-step outputs of one tracking pass over N+1 frames (N steps)."""

    relative: List[Tensor]  # N x (6,) head outputs
    hidden: List[Tensor]  # N x H_t
    outputs: List[Tensor]  # N x O_t
    features: List[Tensor]  # N x X_t

    def __len__(self) -> int:
        return len(self.relative)

    def relative_poses(self) -> List[Pose6DoF]:
        return [to_pose(v) for v in self.relative]


def track_sequence(frames: Sequence[Tensor], params: ModelParams) -> TrackingResult:
    """
    Run the tracking recurrence from zero state.

    Args:
        frames: N+1 frames, each ``3 x H x W``
        params: Model parameters

    Returns:
        TrackingResult with N relative poses, hidden states, outputs and features
    """
    if len(frames) < 2:
        raise ValueError(f"track_sequence needs at least 2 frames, got {len(frames)}")

    spec = params.spec
    encoder = params.encoder
    cell = params.tracking_cell
    head = params.tracking_head
    state = TrackingState.zeros(*spec.feature_shape)

    result = TrackingResult([], [], [], [])
    for prev, cur in zip(frames[:-1], frames[1:]):
        x = encode_pair(prev, cur, encoder, spec.encoder, spec.activation)
        out, state = convlstm_step(x, state, cell)
        result.features.append(x)
        result.outputs.append(out)
        result.hidden.append(state.hidden)
        result.relative.append(se3_head(out, head))
    return result

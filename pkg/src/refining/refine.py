"""Refining recurrence producing absolute poses from attended memory."""

from dataclasses import dataclass, field
from typing import List, Sequence, Tuple

from src.geometry import Pose6DoF
from src.model import ConvLSTMParams, FusionParams, ModelParams, TrackingState, convlstm_step, se3_head, to_pose
from src.tensor import Tensor, ops
from src.utils.logger import setup_logger

from .attention import AttentionWeights, attention_weights, guided_memory, guided_observation

logger = setup_logger(__name__)

# Same cell contract as tracking, independent weights.
RefiningState = TrackingState


@dataclass(frozen=True)
class RefiningResult:
    absolute: List[Tensor]  # T x (6,) poses w.r.t. the window origin
    outputs: List[Tensor]  # T x O^A_t
    attention: List[AttentionWeights] = field(default_factory=list)

    def absolute_poses(self) -> List[Pose6DoF]:
        return [to_pose(v) for v in self.absolute]


def fuse_features(memory_feature: Tensor, observation: Tensor, params: FusionParams) -> Tensor:
    """concat -> 3x3 conv -> tanh -> 3x3 conv, stride 1 and padding 1."""
    x = ops.concat_channels([memory_feature, observation])
    pad1 = params.conv1_weight.shape[2] // 2
    pad2 = params.conv2_weight.shape[2] // 2
    x = ops.conv2d(x, params.conv1_weight, params.conv1_bias, stride=1, padding=pad1)
    x = ops.tanh(x)
    return ops.conv2d(x, params.conv2_weight, params.conv2_bias, stride=1, padding=pad2)


def refine_step(x: Tensor, state: RefiningState, params: ConvLSTMParams) -> Tuple[Tensor, RefiningState]:
    return convlstm_step(x, state, params)


def refine_sequence(
    features: Sequence[Tensor],
    memory: Sequence[Tensor],
    params: ModelParams,
    use_temporal: bool = True,
    use_spatial: bool = True,
    record_attention: bool = False,
) -> RefiningResult:
    """
    Refine every step of a window against the memory.

    Args:
        features: Encoder features X_1..X_T of the window
        memory: Stored hidden states, storage order
        params: Model parameters
        use_temporal: Temporal attention on (alpha from similarity)
        use_spatial: Channel attention on (beta from similarity)
        record_attention: Keep the alpha/beta values of every step

    Returns:
        RefiningResult with one absolute pose per step
    """
    if not features:
        raise ValueError("refine_sequence needs at least one feature map")
    if not memory:
        raise ValueError("refine_sequence needs a populated memory")

    state = RefiningState.zeros(*features[0].shape)
    guidance = Tensor.zeros(features[0].shape)
    fusion = params.fusion
    cell = params.refining_cell
    head = params.refining_head

    result = RefiningResult([], [])
    for t, x in enumerate(features, start=1):
        if record_attention:
            weights = attention_weights(guidance, memory, use_temporal, use_spatial)
            result.attention.append(weights)
            logger.debug(f"step {t}: alpha={weights.alpha.round(4).tolist()}")
        selected = guided_memory(guidance, memory, use_temporal, use_spatial)
        observed = guided_observation(guidance, x, use_spatial)
        fused = fuse_features(selected, observed, fusion)
        out, state = refine_step(fused, state, cell)
        result.outputs.append(out)
        result.absolute.append(se3_head(out, head))
        guidance = out
    return result

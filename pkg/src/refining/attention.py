"""
Spatio-temporal attention over memory slots.

Temporal weights alpha score whole slots against the guidance feature;
channel weights beta score each channel of a slot against the same channel
of the guidance and are rescaled so that the neutral case is all-ones.
"""

from dataclasses import dataclass
from typing import List, Sequence

import numpy as np

from src.tensor import Tensor, no_grad, ops
from src.utils.errors import ShapeError


@dataclass(frozen=True)
class AttentionWeights:
    alpha: np.ndarray  # (N,)
    beta: np.ndarray  # (N, C)


def _check_slots(guidance: Tensor, memory: Sequence[Tensor]) -> None:
    if len(memory) == 0:
        raise ValueError("attention over an empty memory")
    for i, slot in enumerate(memory):
        if slot.shape != guidance.shape:
            raise ShapeError(f"memory slot {i} has shape {slot.shape}, guidance {guidance.shape}")


def temporal_weights(guidance: Tensor, memory: Sequence[Tensor], enabled: bool = True) -> Tensor:
    """alpha = softmax of the cosine similarities between guidance and each slot.

    A zero guidance scores every slot 0 and yields the uniform vector.
    """
    _check_slots(guidance, memory)
    n = len(memory)
    if not enabled:
        return Tensor(np.full(n, 1.0 / n))
    scores = ops.stack([ops.cosine_similarity(guidance, slot) for slot in memory])
    return ops.softmax(scores)


def spatial_weights(guidance: Tensor, feature: Tensor, enabled: bool = True) -> Tensor:
    """beta row for one feature map: C * softmax of per-channel cosine similarities."""
    if guidance.shape != feature.shape:
        raise ShapeError(f"spatial_weights: shape mismatch {guidance.shape} vs {feature.shape}")
    if guidance.ndim != 3:
        raise ShapeError(f"spatial_weights: expected C x H x W, got {guidance.shape}")
    channels = feature.shape[0]
    if not enabled:
        return Tensor(np.ones(channels))
    scores = ops.channel_cosine_similarity(guidance, feature)
    return ops.scale(ops.softmax(scores), channels)


def guided_memory(
    guidance: Tensor,
    memory: Sequence[Tensor],
    use_temporal: bool = True,
    use_spatial: bool = True,
) -> Tensor:
    """
    Attention-selected memory M' = sum_i alpha_i * (beta_i * m_i).

    Args:
        guidance: Previous refining output, same shape as the slots
        memory: Stored hidden states in storage order
        use_temporal: False replaces alpha by the uniform vector
        use_spatial: False replaces every beta row by ones

    Returns:
        Tensor with the slot shape
    """
    _check_slots(guidance, memory)
    alpha = temporal_weights(guidance, memory, enabled=use_temporal)
    reweighted = [
        ops.channel_scale(slot, spatial_weights(guidance, slot, enabled=use_spatial))
        for slot in memory
    ]
    return ops.weighted_sum(reweighted, alpha)


def guided_observation(guidance: Tensor, observation: Tensor, use_spatial: bool = True) -> Tensor:
    """Channel reweighting of the current encoder features by the guidance."""
    beta = spatial_weights(guidance, observation, enabled=use_spatial)
    return ops.channel_scale(observation, beta)


def attention_weights(
    guidance: Tensor,
    memory: Sequence[Tensor],
    use_temporal: bool = True,
    use_spatial: bool = True,
) -> AttentionWeights:
    """Values of alpha and beta for inspection; nothing is recorded."""
    with no_grad():
        alpha = temporal_weights(guidance, memory, enabled=use_temporal)
        rows: List[np.ndarray] = [
            spatial_weights(guidance, slot, enabled=use_spatial).numpy() for slot in memory
        ]
    return AttentionWeights(alpha.numpy(), np.stack(rows))

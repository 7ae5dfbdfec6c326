"""Spatio-temporal attention refinement over the memory."""

from .attention import (
    AttentionWeights,
    attention_weights,
    guided_memory,
    guided_observation,
    spatial_weights,
    temporal_weights,
)
from .refine import (
    RefiningResult,
    RefiningState,
    fuse_features,
    refine_sequence,
    refine_step,
)

__all__ = [
    "AttentionWeights",
    "attention_weights",
    "guided_memory",
    "guided_observation",
    "spatial_weights",
    "temporal_weights",
    "RefiningResult",
    "RefiningState",
    "fuse_features",
    "refine_sequence",
    "refine_step",
]

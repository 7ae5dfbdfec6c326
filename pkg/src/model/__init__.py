"""Tracking network: pairwise encoder, ConvLSTM and SE(3) head."""

from .encoder import (
    ConvLayerSpec,
    EncoderConfig,
    EncoderParams,
    ENCODER_PRESETS,
    encoder_preset,
    encode_pair,
)
from .convlstm import ConvLSTMParams, TrackingState, convlstm_step
from .se3_head import SE3HeadParams, se3_head, to_pose
from .params import (
    FusionParams,
    ModelParams,
    NetworkSpec,
    PARAMETER_GROUPS,
    init_params,
)
from .tracking import TrackingResult, track_sequence
from .checkpoint import save_checkpoint, load_checkpoint

__all__ = [
    "ConvLayerSpec",
    "EncoderConfig",
    "EncoderParams",
    "ENCODER_PRESETS",
    "encoder_preset",
    "encode_pair",
    "ConvLSTMParams",
    "TrackingState",
    "convlstm_step",
    "SE3HeadParams",
    "se3_head",
    "to_pose",
    "FusionParams",
    "ModelParams",
    "NetworkSpec",
    "PARAMETER_GROUPS",
    "init_params",
    "TrackingResult",
    "track_sequence",
    "save_checkpoint",
    "load_checkpoint",
]

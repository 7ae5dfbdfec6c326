"""
Pairwise image encoder: nine strided convolutions over the channel-stacked
previous and current frames.
"""

from dataclasses import dataclass
from typing import Dict, List, Literal, Tuple

from pydantic import BaseModel, Field, field_validator, model_validator

from src.tensor import Tensor, ops
from src.utils.errors import ShapeError

ENCODER_DEPTH = 9
Activation = Literal["relu", "tanh", "sigmoid"]


class ConvLayerSpec(BaseModel):
    out_channels: int = Field(..., ge=1, description="Output channels")
    kernel: int = Field(..., ge=1, description="Square kernel extent")
    stride: int = Field(1, ge=1)
    padding: int = Field(0, ge=0)


class EncoderConfig(BaseModel):
    """Layer table and input extents of the encoder."""

    image_height: int = Field(..., ge=1)
    image_width: int = Field(..., ge=1)
    image_channels: int = Field(3, ge=1, description="Channels per frame")
    layers: List[ConvLayerSpec]

    @field_validator("layers")
    @classmethod
    def _nine_layers(cls, layers):
        if len(layers) != ENCODER_DEPTH:
            raise ValueError(f"encoder needs exactly {ENCODER_DEPTH} layers, got {len(layers)}")
        return layers

    @model_validator(mode="after")
    def _stride_divides_extents(self):
        stride = self.cumulative_stride
        if self.image_height % stride or self.image_width % stride:
            raise ValueError(
                f"cumulative stride {stride} does not divide input {self.image_height}x{self.image_width}"
            )
        self.output_shape()
        return self

    @property
    def cumulative_stride(self) -> int:
        stride = 1
        for layer in self.layers:
            stride *= layer.stride
        return stride

    @property
    def in_channels(self) -> int:
        return 2 * self.image_channels

    @property
    def out_channels(self) -> int:
        return self.layers[-1].out_channels

    def output_shape(self) -> Tuple[int, int, int]:
        """Feature map extents ``(C, H', W')`` after all layers."""
        h, w = self.image_height, self.image_width
        for i, layer in enumerate(self.layers, start=1):
            if layer.kernel > h + 2 * layer.padding or layer.kernel > w + 2 * layer.padding:
                raise ValueError(f"layer {i}: kernel {layer.kernel} exceeds padded input {h}x{w}")
            h = ops.conv_output_extent(h, layer.kernel, layer.stride, layer.padding)
            w = ops.conv_output_extent(w, layer.kernel, layer.stride, layer.padding)
        return self.out_channels, h, w


def _table(height, width, channels, kernels, strides) -> EncoderConfig:
    layers = [
        ConvLayerSpec(out_channels=c, kernel=k, stride=s, padding=k // 2)
        for c, k, s in zip(channels, kernels, strides)
    ]
    return EncoderConfig(image_height=height, image_width=width, layers=layers)


ENCODER_PRESETS: Dict[str, EncoderConfig] = {
    # Test-sized network: 16x16 frames -> 4 x 4 x 4
    "tiny": _table(16, 16, (4,) * 9, (5, 3, 3, 3, 3, 3, 3, 3, 3), (2, 1, 2, 1, 1, 1, 1, 1, 1)),
    # 64x64 frames -> 64 x 4 x 4
    "desk": _table(64, 64, (8, 8, 16, 16, 32, 32, 64, 64, 64),
                   (7, 5, 3, 3, 3, 3, 3, 3, 3), (2, 2, 2, 1, 2, 1, 1, 1, 1)),
    # FlowNet-simple contracting part at 1280x384 -> 1024 x 6 x 20
    "kitti-shape": _table(384, 1280, (64, 128, 256, 256, 512, 512, 512, 512, 1024),
                          (7, 5, 5, 3, 3, 3, 3, 3, 3), (2, 2, 2, 1, 2, 1, 2, 1, 2)),
}


def encoder_preset(name: str) -> EncoderConfig:
    if name not in ENCODER_PRESETS:
        raise ValueError(f"Unknown preset '{name}', expected one of {sorted(ENCODER_PRESETS)}")
    return ENCODER_PRESETS[name]


@dataclass(frozen=True)
class EncoderParams:
    """(kernel, bias) per encoder layer, in layer order."""

    layers: Tuple[Tuple[Tensor, Tensor], ...]


def encode_pair(
    prev: Tensor,
    cur: Tensor,
    params: EncoderParams,
    config: EncoderConfig,
    activation: Activation = "relu",
) -> Tensor:
    """
    Encode two consecutive frames into one feature map.

    Args:
        prev: Frame t-1, ``3 x H x W``
        cur: Frame t, same extents
        params: Layer weights
        config: Layer table the weights were built for
        activation: Nonlinearity applied after every layer

    Returns:
        ``C x H' x W'`` feature map

    Raises:
        ShapeError: If the frames differ from each other or from the config
    """
    expected = (config.image_channels, config.image_height, config.image_width)
    if prev.shape != expected or cur.shape != expected:
        raise ShapeError(f"encode_pair: frames {prev.shape}, {cur.shape} do not match {expected}")
    if len(params.layers) != len(config.layers):
        raise ShapeError(f"encode_pair: {len(params.layers)} weight layers for {len(config.layers)} specs")

    x = ops.concat_channels([prev, cur])
    for (kernel, bias), layer in zip(params.layers, config.layers):
        x = ops.conv2d(x, kernel, bias, stride=layer.stride, padding=layer.padding)
        x = ops.elementwise_activation(x, activation)
    return x

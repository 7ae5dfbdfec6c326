"""
Network description and the named parameter set of the full model.

Parameter names are stable and double as checkpoint keys:

    encoder.conv{1..9}.weight / .bias
    tracking.cell.w_x / .w_h / .bias
    tracking.head.weight / .bias
    refining.fusion.conv1.weight / .bias, refining.fusion.conv2.weight / .bias
    refining.cell.w_x / .w_h / .bias
    refining.head.weight / .bias
"""

from dataclasses import dataclass
from typing import Dict, Iterator, List, Mapping, Tuple

import numpy as np
from pydantic import BaseModel, Field

from src.tensor import Tensor
from src.utils.logger import setup_logger

from .convlstm import ConvLSTMParams
from .encoder import Activation, EncoderConfig, EncoderParams, encoder_preset
from .se3_head import POSE_DIM, SE3HeadParams

logger = setup_logger(__name__)

RECURRENT_KERNEL = 3
FUSION_KERNEL = 3

PARAMETER_GROUPS = (
    "encoder",
    "tracking.cell",
    "tracking.head",
    "refining.fusion",
    "refining.cell",
    "refining.head",
)


class NetworkSpec(BaseModel):
    """Everything needed to rebuild the parameter shapes."""

    preset: str = Field(..., description="Name of the encoder preset")
    encoder: EncoderConfig
    activation: Activation = Field("relu", description="Encoder nonlinearity")

    @classmethod
    def from_preset(cls, preset: str, activation: Activation = "relu") -> "NetworkSpec":
        return cls(preset=preset, encoder=encoder_preset(preset), activation=activation)

    @property
    def hidden_channels(self) -> int:
        # Recurrent units keep the encoder width so slots, guidance and
        # observations share one shape.
        return self.encoder.out_channels

    @property
    def feature_shape(self) -> Tuple[int, int, int]:
        return self.encoder.output_shape()

    def parameter_shapes(self) -> Dict[str, Tuple[int, ...]]:
        """Ordered name -> shape table."""
        shapes: Dict[str, Tuple[int, ...]] = {}
        c_in = self.encoder.in_channels
        for i, layer in enumerate(self.encoder.layers, start=1):
            shapes[f"encoder.conv{i}.weight"] = (layer.out_channels, c_in, layer.kernel, layer.kernel)
            shapes[f"encoder.conv{i}.bias"] = (layer.out_channels,)
            c_in = layer.out_channels

        c = self.hidden_channels
        k = RECURRENT_KERNEL
        for path in ("tracking", "refining"):
            if path == "refining":
                shapes["refining.fusion.conv1.weight"] = (c, 2 * c, FUSION_KERNEL, FUSION_KERNEL)
                shapes["refining.fusion.conv1.bias"] = (c,)
                shapes["refining.fusion.conv2.weight"] = (c, c, FUSION_KERNEL, FUSION_KERNEL)
                shapes["refining.fusion.conv2.bias"] = (c,)
            shapes[f"{path}.cell.w_x"] = (4 * c, c, k, k)
            shapes[f"{path}.cell.w_h"] = (4 * c, c, k, k)
            shapes[f"{path}.cell.bias"] = (4 * c,)
            shapes[f"{path}.head.weight"] = (POSE_DIM, c)
            shapes[f"{path}.head.bias"] = (POSE_DIM,)
        return shapes


@dataclass(frozen=True)
class FusionParams:
    """Two 3x3 convolutions merging guided memory and guided observation."""

    conv1_weight: Tensor
    conv1_bias: Tensor
    conv2_weight: Tensor
    conv2_bias: Tensor


@dataclass(frozen=True, eq=False)
class ModelParams:
    """All network tensors keyed by name, plus the spec they were built for."""

    spec: NetworkSpec
    tensors: Mapping[str, Tensor]

    def __getitem__(self, name: str) -> Tensor:
        return self.tensors[name]

    def __iter__(self) -> Iterator[str]:
        return iter(self.tensors)

    def __len__(self) -> int:
        return len(self.tensors)

    def names(self) -> List[str]:
        return list(self.tensors)

    def named_tensors(self) -> List[Tuple[str, Tensor]]:
        return list(self.tensors.items())

    def parameter_count(self) -> int:
        return sum(t.size for t in self.tensors.values())

    def group(self, group: str) -> List[str]:
        """Names of the parameters in one of ``PARAMETER_GROUPS``."""
        if group not in PARAMETER_GROUPS:
            raise ValueError(f"Unknown parameter group '{group}'")
        return [name for name in self.tensors if name.startswith(group + ".")]

    def replace(self, tensors: Mapping[str, Tensor]) -> "ModelParams":
        missing = set(self.tensors) - set(tensors)
        if missing:
            raise KeyError(f"missing parameters: {sorted(missing)}")
        return ModelParams(self.spec, {name: tensors[name] for name in self.tensors})

    def as_leaves(self) -> "ModelParams":
        """Fresh gradient-tracked copies of every tensor."""
        return ModelParams(self.spec, {name: t.leaf(name) for name, t in self.tensors.items()})

    def detached(self) -> "ModelParams":
        return ModelParams(self.spec, {name: t.detach() for name, t in self.tensors.items()})

    # -- structured views ------------------------------------------------------

    @property
    def encoder(self) -> EncoderParams:
        depth = len(self.spec.encoder.layers)
        return EncoderParams(tuple(
            (self.tensors[f"encoder.conv{i}.weight"], self.tensors[f"encoder.conv{i}.bias"])
            for i in range(1, depth + 1)
        ))

    def _cell(self, path: str) -> ConvLSTMParams:
        return ConvLSTMParams(self.tensors[f"{path}.cell.w_x"], self.tensors[f"{path}.cell.w_h"],
                              self.tensors[f"{path}.cell.bias"])

    def _head(self, path: str) -> SE3HeadParams:
        return SE3HeadParams(self.tensors[f"{path}.head.weight"], self.tensors[f"{path}.head.bias"])

    @property
    def tracking_cell(self) -> ConvLSTMParams:
        return self._cell("tracking")

    @property
    def tracking_head(self) -> SE3HeadParams:
        return self._head("tracking")

    @property
    def refining_cell(self) -> ConvLSTMParams:
        return self._cell("refining")

    @property
    def refining_head(self) -> SE3HeadParams:
        return self._head("refining")

    @property
    def fusion(self) -> FusionParams:
        t = self.tensors
        return FusionParams(t["refining.fusion.conv1.weight"], t["refining.fusion.conv1.bias"],
                            t["refining.fusion.conv2.weight"], t["refining.fusion.conv2.bias"])


def _fans(shape: Tuple[int, ...]) -> Tuple[int, int]:
    if len(shape) == 4:
        receptive = shape[2] * shape[3]
        return shape[1] * receptive, shape[0] * receptive
    return shape[1], shape[0]


def init_params(spec: NetworkSpec, seed: int = 0) -> ModelParams:
    """
    Initialize a model: uniform in +-sqrt(6 / (fan_in + fan_out)) for kernels
    and linear maps, zeros for biases.

    Args:
        spec: Network description
        seed: Seed of the generator; tensors are drawn in name order

    Returns:
        ModelParams
    """
    rng = np.random.default_rng(seed)
    tensors: Dict[str, Tensor] = {}
    for name, shape in spec.parameter_shapes().items():
        if name.endswith("bias"):
            tensors[name] = Tensor(np.zeros(shape), name=name)
            continue
        fan_in, fan_out = _fans(shape)
        limit = np.sqrt(6.0 / (fan_in + fan_out))
        tensors[name] = Tensor(rng.uniform(-limit, limit, size=shape), name=name)

    params = ModelParams(spec, tensors)
    logger.info(f"Initialized '{spec.preset}' model: {len(params)} tensors, "
                f"{params.parameter_count()} values (seed {seed})")
    return params

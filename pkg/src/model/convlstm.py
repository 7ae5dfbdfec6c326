"""Convolutional LSTM cell shared by the tracking and refining recurrences."""

from dataclasses import dataclass
from typing import Tuple

import numpy as np

from src.tensor import Tensor, ops
from src.utils.errors import ShapeError


@dataclass(frozen=True)
class ConvLSTMParams:
    """
    Stacked gate kernels, gate order (input, forget, output, candidate).

    ``w_x`` is ``4Ch x C_in x k x k``, ``w_h`` is ``4Ch x Ch x k x k`` and
    ``bias`` has length ``4Ch``; the forget-gate bias is ``bias[Ch:2Ch]``.
    """

    w_x: Tensor
    w_h: Tensor
    bias: Tensor

    @property
    def hidden_channels(self) -> int:
        return self.w_h.shape[1]

    @property
    def input_channels(self) -> int:
        return self.w_x.shape[1]

    @property
    def kernel(self) -> int:
        return self.w_x.shape[2]

    def validate(self) -> None:
        ch = self.hidden_channels
        if self.w_x.ndim != 4 or self.w_h.ndim != 4:
            raise ShapeError("ConvLSTM kernels must be 4D")
        if self.w_x.shape[0] != 4 * ch or self.w_h.shape[0] != 4 * ch:
            raise ShapeError(f"ConvLSTM kernels need {4 * ch} output channels")
        if self.w_x.shape[2:] != self.w_h.shape[2:]:
            raise ShapeError(f"ConvLSTM gate kernels differ: {self.w_x.shape[2:]} vs {self.w_h.shape[2:]}")
        if self.bias.shape != (4 * ch,):
            raise ShapeError(f"ConvLSTM bias must have length {4 * ch}, got {self.bias.shape}")


@dataclass(frozen=True)
class TrackingState:
    """Hidden state H and cell state of a ConvLSTM; same shape."""

    hidden: Tensor
    cell: Tensor

    @classmethod
    def zeros(cls, channels: int, height: int, width: int) -> "TrackingState":
        return cls(Tensor.zeros((channels, height, width)), Tensor.zeros((channels, height, width)))


def convlstm_step(x: Tensor, state: TrackingState, params: ConvLSTMParams) -> Tuple[Tensor, TrackingState]:
    """
    One ConvLSTM update.

    Args:
        x: Input feature map ``C_in x H x W``
        state: Previous (H, Cc), each ``Ch x H x W``
        params: Gate kernels

    Returns:
        Tuple of (output O = new H, new state)

    Raises:
        ShapeError: On channel or spatial mismatch
    """
    params.validate()
    ch = params.hidden_channels
    if x.ndim != 3 or x.shape[0] != params.input_channels:
        raise ShapeError(f"convlstm_step: input {x.shape} does not have {params.input_channels} channels")
    if state.hidden.shape != (ch,) + x.shape[1:] or state.cell.shape != state.hidden.shape:
        raise ShapeError(
            f"convlstm_step: state {state.hidden.shape} does not match input extents {x.shape[1:]}"
        )

    pad = params.kernel // 2
    gates = ops.add(
        ops.conv2d(x, params.w_x, params.bias, stride=1, padding=pad),
        ops.conv2d(state.hidden, params.w_h, Tensor(np.zeros(4 * ch)), stride=1, padding=pad),
    )
    in_gate, forget_gate, out_gate, cell_gate = ops.split_channels(gates, [ch] * 4)

    in_gate = ops.sigmoid(in_gate)
    forget_gate = ops.sigmoid(forget_gate)
    out_gate = ops.sigmoid(out_gate)
    cell_gate = ops.tanh(cell_gate)

    cell = ops.add(ops.mul(forget_gate, state.cell), ops.mul(in_gate, cell_gate))
    hidden = ops.mul(out_gate, ops.tanh(cell))
    return hidden, TrackingState(hidden, cell)

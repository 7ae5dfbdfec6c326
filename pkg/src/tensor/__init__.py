"""Double-precision tensors with reverse-mode differentiation."""

from .tensor import Tensor, backward, no_grad, is_recording
from .gradcheck import finite_diff_check, check_gradients
from .blob import read_blob, write_blob, to_bytes, from_bytes
from . import ops

__all__ = [
    "Tensor",
    "backward",
    "no_grad",
    "is_recording",
    "finite_diff_check",
    "check_gradients",
    "read_blob",
    "write_blob",
    "to_bytes",
    "from_bytes",
    "ops",
]

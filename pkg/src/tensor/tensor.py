"""Dense float64 tensors with a reverse-mode differentiation record."""

from __future__ import annotations

import contextvars
from contextlib import contextmanager
from dataclasses import dataclass
from typing import Callable, Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np

from src.utils.errors import ShapeError

ArrayLike = Union[np.ndarray, float, int, Sequence[float], Sequence[Sequence[float]]]

# Maps the gradient of an op's output to one gradient (or None) per input.
BackwardRule = Callable[[np.ndarray], Tuple[Optional[np.ndarray], ...]]

_recording = contextvars.ContextVar("tensor_recording", default=True)


@contextmanager
def no_grad() -> Iterator[None]:
    """Run a block without recording operations for differentiation."""
    token = _recording.set(False)
    try:
        yield
    finally:
        _recording.reset(token)


def is_recording() -> bool:
    return _recording.get()


@dataclass(frozen=True)
class Node:
    """One recorded operation: its inputs and local-gradient rule."""

    op: str
    inputs: Tuple["Tensor", ...]
    rule: BackwardRule


class Tensor:
    """
    Immutable row-major float64 array, optionally tracked for gradients.

    The wrapped array is read-only; operations always build new tensors, so a
    tensor that took part in a record is never mutated afterwards.
    """

    __slots__ = ("_data", "requires_grad", "grad", "node", "name")

    def __init__(
        self,
        data: ArrayLike,
        requires_grad: bool = False,
        name: Optional[str] = None,
        node: Optional[Node] = None,
        _owned: bool = False,
    ):
        if _owned:
            array = np.ascontiguousarray(data, dtype=np.float64).reshape(np.shape(data))
        else:
            array = np.array(data, dtype=np.float64, copy=True, order="C")
        array.flags.writeable = False
        self._data = array
        self.requires_grad = bool(requires_grad)
        self.grad: Optional[Tensor] = None
        self.node = node
        self.name = name

    # -- construction helpers -------------------------------------------------

    @classmethod
    def zeros(cls, shape: Sequence[int], requires_grad: bool = False) -> "Tensor":
        return cls(np.zeros(tuple(shape)), requires_grad=requires_grad)

    @classmethod
    def _from_op(cls, data: np.ndarray, op: str, inputs: Sequence["Tensor"],
                 rule: BackwardRule) -> "Tensor":
        track = is_recording() and any(t.requires_grad for t in inputs)
        node = Node(op, tuple(inputs), rule) if track else None
        return cls(data, requires_grad=track, node=node, _owned=True)

    # -- views -----------------------------------------------------------------

    @property
    def data(self) -> np.ndarray:
        return self._data

    @property
    def shape(self) -> Tuple[int, ...]:
        return self._data.shape

    @property
    def ndim(self) -> int:
        return self._data.ndim

    @property
    def size(self) -> int:
        return self._data.size

    @property
    def is_leaf(self) -> bool:
        return self.node is None

    def numpy(self) -> np.ndarray:
        """Writable copy of the values."""
        return np.array(self._data, copy=True)

    def item(self) -> float:
        if self._data.size != 1:
            raise ShapeError(f"item() needs a single-element tensor, got shape {self.shape}")
        return float(self._data.reshape(()))

    def detach(self) -> "Tensor":
        """Same values, cut from the record."""
        return Tensor(self._data, _owned=True)

    def leaf(self, name: Optional[str] = None) -> "Tensor":
        """A fresh gradient-tracked leaf with these values."""
        return Tensor(self._data, requires_grad=True, name=name or self.name, _owned=True)

    def backward(self) -> None:
        backward(self)

    def __repr__(self) -> str:
        flag = ", requires_grad=True" if self.requires_grad else ""
        label = f" '{self.name}'" if self.name else ""
        return f"Tensor{label}(shape={self.shape}{flag})"

    # -- arithmetic sugar (delegates to ops) -------------------------------------

    def __add__(self, other):
        from . import ops
        return ops.add(self, _as_tensor(other, self.shape))

    __radd__ = __add__

    def __sub__(self, other):
        from . import ops
        return ops.sub(self, _as_tensor(other, self.shape))

    def __rsub__(self, other):
        from . import ops
        return ops.sub(_as_tensor(other, self.shape), self)

    def __mul__(self, other):
        from . import ops
        if isinstance(other, (int, float)):
            return ops.scale(self, float(other))
        return ops.mul(self, other)

    __rmul__ = __mul__

    def __neg__(self):
        from . import ops
        return ops.scale(self, -1.0)

    def __getitem__(self, key):
        from . import ops
        return ops.getitem(self, key)


def _as_tensor(value, shape: Tuple[int, ...]) -> Tensor:
    if isinstance(value, Tensor):
        return value
    return Tensor(np.broadcast_to(np.asarray(value, dtype=np.float64), shape))


def topological_order(root: Tensor) -> List[Tensor]:
    """Tensors reachable from ``root`` through the record, inputs first.

    Iterative so that long unrolled sequences do not hit the recursion limit.
    """
    order: List[Tensor] = []
    visited = set()
    stack: List[Tuple[Tensor, bool]] = [(root, False)]
    while stack:
        tensor, expanded = stack.pop()
        if expanded:
            order.append(tensor)
            continue
        if id(tensor) in visited:
            continue
        visited.add(id(tensor))
        stack.append((tensor, True))
        if tensor.node is not None:
            for parent in reversed(tensor.node.inputs):
                if parent.requires_grad and id(parent) not in visited:
                    stack.append((parent, False))
    return order


def backward(root: Tensor) -> None:
    """Replay the record from a scalar root and populate leaf gradients.

    Every gradient-tracked leaf reachable from ``root`` receives its
    derivative once per call; an existing ``grad`` is accumulated into.
    """
    if root.size != 1:
        raise ShapeError(f"backward() needs a scalar root, got shape {root.shape}")
    if not root.requires_grad:
        return

    grads = {id(root): np.ones(root.shape)}
    for tensor in reversed(topological_order(root)):
        grad = grads.pop(id(tensor), None)
        if grad is None:
            continue
        if tensor.node is None:
            if tensor.grad is None:
                tensor.grad = Tensor(grad)
            else:
                tensor.grad = Tensor(tensor.grad.data + grad)
            continue
        input_grads = tensor.node.rule(grad)
        for parent, g in zip(tensor.node.inputs, input_grads):
            if g is None or not parent.requires_grad:
                continue
            if g.shape != parent.shape:
                raise ShapeError(
                    f"gradient shape {g.shape} does not match input shape {parent.shape} "
                    f"in op '{tensor.node.op}'"
                )
            key = id(parent)
            if key in grads:
                grads[key] = grads[key] + g
            else:
                grads[key] = g

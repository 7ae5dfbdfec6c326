"""Differentiable tensor operations used by the network, losses and attention.

Every op takes and returns :class:`Tensor` values and registers a local
gradient rule when any input is tracked. Layouts are row-major; images and
feature maps are ``C x H x W`` with no batch axis.
"""

from typing import List, Sequence

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from src.utils.errors import ShapeError

from .tensor import Tensor

ACTIVATIONS = ("sigmoid", "tanh", "relu")


def _same_shape(op: str, a: Tensor, b: Tensor) -> None:
    if a.shape != b.shape:
        raise ShapeError(f"{op}: shape mismatch {a.shape} vs {b.shape}")


# ---------------------------------------------------------------------------
# Elementwise arithmetic
# ---------------------------------------------------------------------------

def add(a: Tensor, b: Tensor) -> Tensor:
    _same_shape("add", a, b)
    return Tensor._from_op(a.data + b.data, "add", (a, b), lambda g: (g, g))


def sub(a: Tensor, b: Tensor) -> Tensor:
    _same_shape("sub", a, b)
    return Tensor._from_op(a.data - b.data, "sub", (a, b), lambda g: (g, -g))


def mul(a: Tensor, b: Tensor) -> Tensor:
    _same_shape("mul", a, b)
    av, bv = a.data, b.data
    return Tensor._from_op(av * bv, "mul", (a, b), lambda g: (g * bv, g * av))


def scale(x: Tensor, factor: float) -> Tensor:
    factor = float(factor)
    return Tensor._from_op(x.data * factor, "scale", (x,), lambda g: (g * factor,))


def tensor_sum(x: Tensor) -> Tensor:
    shape = x.shape
    return Tensor._from_op(np.asarray(x.data.sum()), "sum", (x,),
                           lambda g: (np.full(shape, float(g)),))


def mean(x: Tensor) -> Tensor:
    return scale(tensor_sum(x), 1.0 / x.size)


def norm2(x: Tensor) -> Tensor:
    """Euclidean norm of all entries; gradient taken as zero at the origin."""
    xv = x.data
    n = float(np.sqrt(np.sum(xv * xv)))

    def rule(g):
        if n == 0.0:
            return (np.zeros_like(xv),)
        return (float(g) * xv / n,)

    return Tensor._from_op(np.asarray(n), "norm2", (x,), rule)


# ---------------------------------------------------------------------------
# Indexing and layout
# ---------------------------------------------------------------------------

def getitem(x: Tensor, key) -> Tensor:
    shape = x.shape

    def rule(g):
        gx = np.zeros(shape)
        np.add.at(gx, key, g)
        return (gx,)

    return Tensor._from_op(np.array(x.data[key]), "getitem", (x,), rule)


def stack(parts: Sequence[Tensor]) -> Tensor:
    """Stack equally shaped tensors along a new leading axis."""
    parts = list(parts)
    if not parts:
        raise ShapeError("stack: no tensors given")
    for p in parts[1:]:
        _same_shape("stack", parts[0], p)
    out = np.stack([p.data for p in parts])
    return Tensor._from_op(out, "stack", parts, lambda g: tuple(g[i] for i in range(len(parts))))


def concat_channels(parts: Sequence[Tensor]) -> Tensor:
    """Concatenate ``C_i x H x W`` tensors along the channel axis, order kept."""
    parts = list(parts)
    if not parts:
        raise ShapeError("concat_channels: no tensors given")
    for p in parts:
        if p.ndim != 3:
            raise ShapeError(f"concat_channels: expected C x H x W, got {p.shape}")
        if p.shape[1:] != parts[0].shape[1:]:
            raise ShapeError(
                f"concat_channels: spatial extents differ {p.shape[1:]} vs {parts[0].shape[1:]}"
            )
    sizes = [p.shape[0] for p in parts]
    bounds = np.cumsum([0] + sizes)
    out = np.concatenate([p.data for p in parts], axis=0)

    def rule(g):
        return tuple(g[bounds[i]:bounds[i + 1]] for i in range(len(parts)))

    return Tensor._from_op(out, "concat_channels", parts, rule)


def split_channels(x: Tensor, sizes: Sequence[int]) -> List[Tensor]:
    """Inverse of :func:`concat_channels`."""
    if sum(sizes) != x.shape[0]:
        raise ShapeError(f"split_channels: sizes {list(sizes)} do not sum to {x.shape[0]}")
    out, start = [], 0
    for size in sizes:
        out.append(getitem(x, slice(start, start + size)))
        start += size
    return out


# ---------------------------------------------------------------------------
# Nonlinearities
# ---------------------------------------------------------------------------

def sigmoid(x: Tensor) -> Tensor:
    xv = x.data
    e = np.exp(-np.abs(xv))
    y = np.where(xv >= 0, 1.0 / (1.0 + e), e / (1.0 + e))
    return Tensor._from_op(y, "sigmoid", (x,), lambda g: (g * y * (1.0 - y),))


def tanh(x: Tensor) -> Tensor:
    y = np.tanh(x.data)
    return Tensor._from_op(y, "tanh", (x,), lambda g: (g * (1.0 - y * y),))


def relu(x: Tensor) -> Tensor:
    mask = x.data > 0
    return Tensor._from_op(np.where(mask, x.data, 0.0), "relu", (x,), lambda g: (g * mask,))


def elementwise_activation(x: Tensor, kind: str) -> Tensor:
    if kind == "sigmoid":
        return sigmoid(x)
    if kind == "tanh":
        return tanh(x)
    if kind == "relu":
        return relu(x)
    raise ValueError(f"Unknown activation '{kind}', expected one of {ACTIVATIONS}")


def softmax(logits: Tensor) -> Tensor:
    """Softmax of a vector, computed with max-subtraction."""
    if logits.ndim != 1:
        raise ShapeError(f"softmax: expected a vector, got shape {logits.shape}")
    if logits.size == 0:
        raise ValueError("softmax: empty input")
    z = logits.data - logits.data.max()
    e = np.exp(z)
    y = e / e.sum()

    def rule(g):
        return (y * (g - np.dot(g, y)),)

    return Tensor._from_op(y, "softmax", (logits,), rule)


# ---------------------------------------------------------------------------
# Similarity, pooling, linear maps
# ---------------------------------------------------------------------------

def cosine_similarity(a: Tensor, b: Tensor) -> Tensor:
    """Cosine of the angle between ``vec(a)`` and ``vec(b)``; 0 if either is zero."""
    _same_shape("cosine_similarity", a, b)
    av, bv = a.data, b.data
    na = float(np.sqrt(np.sum(av * av)))
    nb = float(np.sqrt(np.sum(bv * bv)))
    if na == 0.0 or nb == 0.0:
        return Tensor._from_op(np.asarray(0.0), "cosine_similarity", (a, b),
                               lambda g: (np.zeros_like(av), np.zeros_like(bv)))
    c = float(np.sum(av * bv)) / (na * nb)

    def rule(g):
        g = float(g)
        ga = g * (bv / (na * nb) - c * av / (na * na))
        gb = g * (av / (na * nb) - c * bv / (nb * nb))
        return ga, gb

    return Tensor._from_op(np.asarray(min(1.0, max(-1.0, c))), "cosine_similarity", (a, b), rule)


def channel_cosine_similarity(a: Tensor, b: Tensor) -> Tensor:
    """Per-channel cosine similarity of two ``C x H x W`` tensors -> vector C.

    Channels where either side has zero norm score 0.
    """
    _same_shape("channel_cosine_similarity", a, b)
    if a.ndim != 3:
        raise ShapeError(f"channel_cosine_similarity: expected C x H x W, got {a.shape}")
    shape = a.shape
    A = a.data.reshape(shape[0], -1)
    B = b.data.reshape(shape[0], -1)
    na = np.sqrt(np.sum(A * A, axis=1))
    nb = np.sqrt(np.sum(B * B, axis=1))
    valid = (na > 0) & (nb > 0)
    safe_na = np.where(valid, na, 1.0)
    safe_nb = np.where(valid, nb, 1.0)
    c = np.where(valid, np.sum(A * B, axis=1) / (safe_na * safe_nb), 0.0)

    def rule(g):
        w = np.where(valid, g, 0.0)[:, None]
        ga = w * (B / (safe_na * safe_nb)[:, None] - c[:, None] * A / (safe_na ** 2)[:, None])
        gb = w * (A / (safe_na * safe_nb)[:, None] - c[:, None] * B / (safe_nb ** 2)[:, None])
        return ga.reshape(shape), gb.reshape(shape)

    return Tensor._from_op(np.clip(c, -1.0, 1.0), "channel_cosine_similarity", (a, b), rule)


def global_avg_pool(x: Tensor) -> Tensor:
    """Mean of every channel of a ``C x H x W`` tensor -> vector C."""
    if x.ndim != 3:
        raise ShapeError(f"global_avg_pool: expected C x H x W, got {x.shape}")
    shape = x.shape
    count = shape[1] * shape[2]
    if count < 1:
        raise ShapeError("global_avg_pool: empty spatial extent")

    def rule(g):
        return (np.broadcast_to((g / count)[:, None, None], shape).copy(),)

    return Tensor._from_op(x.data.mean(axis=(1, 2)), "global_avg_pool", (x,), rule)


def linear(x: Tensor, weight: Tensor, bias: Tensor) -> Tensor:
    """``weight @ x + bias`` for a vector ``x``."""
    if x.ndim != 1 or weight.ndim != 2 or weight.shape[1] != x.shape[0]:
        raise ShapeError(f"linear: weight {weight.shape} does not fit input {x.shape}")
    if bias.shape != (weight.shape[0],):
        raise ShapeError(f"linear: bias {bias.shape} does not fit weight {weight.shape}")
    xv, wv = x.data, weight.data

    def rule(g):
        return wv.T @ g, np.outer(g, xv), g

    return Tensor._from_op(wv @ xv + bias.data, "linear", (x, weight, bias), rule)


def channel_scale(x: Tensor, weights: Tensor) -> Tensor:
    """Multiply channel ``j`` of a ``C x H x W`` tensor by ``weights[j]``."""
    if x.ndim != 3 or weights.shape != (x.shape[0],):
        raise ShapeError(f"channel_scale: weights {weights.shape} do not fit {x.shape}")
    xv, wv = x.data, weights.data

    def rule(g):
        return g * wv[:, None, None], np.sum(g * xv, axis=(1, 2))

    return Tensor._from_op(xv * wv[:, None, None], "channel_scale", (x, weights), rule)


def weighted_sum(parts: Sequence[Tensor], weights: Tensor) -> Tensor:
    """``sum_i weights[i] * parts[i]``, accumulated in index order."""
    parts = list(parts)
    if not parts:
        raise ShapeError("weighted_sum: no tensors given")
    if weights.shape != (len(parts),):
        raise ShapeError(f"weighted_sum: {len(parts)} parts but weights {weights.shape}")
    for p in parts[1:]:
        _same_shape("weighted_sum", parts[0], p)
    wv = weights.data
    out = np.zeros(parts[0].shape)
    for w, p in zip(wv, parts):
        out = out + w * p.data

    def rule(g):
        grads = [g * w for w in wv]
        gw = np.array([np.sum(g * p.data) for p in parts])
        return tuple(grads) + (gw,)

    return Tensor._from_op(out, "weighted_sum", parts + [weights], rule)


# ---------------------------------------------------------------------------
# Convolution
# ---------------------------------------------------------------------------

def conv_output_extent(extent: int, kernel: int, stride: int, padding: int) -> int:
    return (extent + 2 * padding - kernel) // stride + 1


def conv2d(x: Tensor, kernel: Tensor, bias: Tensor, stride: int = 1, padding: int = 0) -> Tensor:
    """
    2D cross-correlation of a ``C_in x H x W`` input with a
    ``C_out x C_in x k x k`` kernel.

    Args:
        x: Input feature map
        kernel: Filter bank
        bias: Per-output-channel bias (length C_out)
        stride: Positive step between output samples
        padding: Zero padding added on every spatial border

    Returns:
        ``C_out x H' x W'`` tensor with ``H' = (H + 2p - k) // stride + 1``

    Raises:
        ShapeError: If channels, kernel extents or bias do not fit the input
    """
    if x.ndim != 3 or kernel.ndim != 4:
        raise ShapeError(f"conv2d: expected C x H x W input and 4D kernel, got {x.shape}, {kernel.shape}")
    c_out, c_in, kh, kw = kernel.shape
    c, h, w = x.shape
    if c_in != c:
        raise ShapeError(f"conv2d: kernel expects {c_in} input channels, input has {c}")
    if kh != kw:
        raise ShapeError(f"conv2d: only square kernels are supported, got {kh}x{kw}")
    if bias.shape != (c_out,):
        raise ShapeError(f"conv2d: bias {bias.shape} does not fit {c_out} output channels")
    if stride < 1 or padding < 0:
        raise ValueError(f"conv2d: invalid stride {stride} or padding {padding}")
    k = kh
    if k > h + 2 * padding or k > w + 2 * padding:
        raise ShapeError(f"conv2d: kernel {k} larger than padded input {h}x{w} (padding {padding})")

    h_out = conv_output_extent(h, k, stride, padding)
    w_out = conv_output_extent(w, k, stride, padding)
    xp = np.pad(x.data, ((0, 0), (padding, padding), (padding, padding)))
    windows = sliding_window_view(xp, (k, k), axis=(1, 2))[:, ::stride, ::stride]
    windows = windows[:, :h_out, :w_out]
    kv = kernel.data
    out = np.tensordot(kv, windows, axes=([1, 2, 3], [0, 3, 4])) + bias.data[:, None, None]

    def rule(g):
        g_kernel = np.tensordot(g, windows, axes=([1, 2], [1, 2]))
        g_bias = g.sum(axis=(1, 2))
        g_xp = np.zeros(xp.shape)
        h_span = stride * (h_out - 1) + 1
        w_span = stride * (w_out - 1) + 1
        for i in range(k):
            for j in range(k):
                g_xp[:, i:i + h_span:stride, j:j + w_span:stride] += np.tensordot(
                    kv[:, :, i, j], g, axes=([0], [0])
                )
        g_x = g_xp[:, padding:padding + h, padding:padding + w]
        return g_x, g_kernel, g_bias

    return Tensor._from_op(out, "conv2d", (x, kernel, bias), rule)

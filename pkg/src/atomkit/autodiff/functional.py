"""
Differentiable operations used by the model: matrix products, softmax,
RMS normalisation, SwiGLU, dropout, concatenation and pairwise rotations.
"""

from __future__ import annotations

from collections.abc import Sequence

import numpy as np

from ..core.errors import ContractError, ShapeError
from .tensor import Array, Tensor, ensure_tensor, unbroadcast

DEFAULT_RMS_EPS = 1e-6


def matmul(a: Tensor, b: Tensor) -> Tensor:
    """
    Matrix product over the last two axes; leading axes broadcast.

    Raises:
        ShapeError: If either operand has fewer than two axes or the inner
            dimensions differ

    Examples:
        >>> matmul(Tensor([[1.0, 2.0], [3.0, 4.0]]), Tensor([[5.0, 6.0], [7.0, 8.0]])).data.tolist()
        [[19.0, 22.0], [43.0, 50.0]]
    """
    if a.ndim < 2 or b.ndim < 2:
        raise ShapeError(f"matmul needs matrices, got shapes {a.shape} and {b.shape}")
    if a.shape[-1] != b.shape[-2]:
        raise ShapeError(f"matmul inner dimensions differ: {a.shape} @ {b.shape}")
    x, y = a.data, b.data

    def backward(g: Array) -> tuple[Array, Array]:
        return (
            unbroadcast(g @ np.swapaxes(y, -1, -2), x.shape),
            unbroadcast(np.swapaxes(x, -1, -2) @ g, y.shape),
        )

    return Tensor.from_op(x @ y, (a, b), backward)


def softmax(x: Tensor, axis: int = -1) -> Tensor:
    """
    Softmax along ``axis`` with max-subtraction.

    Raises:
        ShapeError: If ``axis`` is out of range

    Examples:
        >>> softmax(Tensor([0.0, np.log(2.0)])).data.round(6).tolist()
        [0.333333, 0.666667]
    """
    if not -x.ndim <= axis < max(x.ndim, 1):
        raise ShapeError(f"axis {axis} out of range for shape {x.shape}")
    shifted = x.data - x.data.max(axis=axis, keepdims=True)
    e = np.exp(shifted)
    out = e / e.sum(axis=axis, keepdims=True)

    def backward(g: Array) -> tuple[Array]:
        return (out * (g - (g * out).sum(axis=axis, keepdims=True)),)

    return Tensor.from_op(out, (x,), backward)


def rms_norm(x: Tensor, gain: Tensor, eps: float = DEFAULT_RMS_EPS) -> Tensor:
    """
    Divide each row by sqrt(mean(x^2) + eps) and scale by ``gain``.

    Raises:
        ShapeError: If the last dimension of ``x`` differs from ``gain``

    Examples:
        >>> rms_norm(Tensor([[1.0, -1.0]]), Tensor([2.0, 2.0]), eps=0.0).data.tolist()
        [[2.0, -2.0]]
    """
    if gain.ndim != 1 or x.shape[-1] != gain.shape[0]:
        raise ShapeError(f"rms_norm gain {gain.shape} does not match input {x.shape}")
    a = x.data
    inv = 1.0 / np.sqrt((a * a).mean(axis=-1, keepdims=True) + eps)
    normed = a * inv
    w = gain.data
    d = a.shape[-1]

    def backward(g: Array) -> tuple[Array, Array]:
        gn = g * w
        gx = inv * (gn - normed * (gn * normed).sum(axis=-1, keepdims=True) / d)
        gw = (g * normed).reshape(-1, d).sum(axis=0)
        return gx, gw

    return Tensor.from_op(normed * w, (x, gain), backward)


def sigmoid(x: Tensor) -> Tensor:
    """Logistic function."""
    return x.sigmoid()


def silu(x: Tensor) -> Tensor:
    """x * sigmoid(x)."""
    return x * x.sigmoid()


def swiglu(x: Tensor) -> Tensor:
    """
    Split the last axis into halves (a, b) and return a * silu(b).

    Raises:
        ShapeError: If the last dimension is odd

    Examples:
        >>> swiglu(Tensor([2.0, 0.5])).data.round(5).tolist()
        [0.62246]
    """
    width = x.shape[-1]
    if width % 2:
        raise ShapeError(f"swiglu needs an even last dimension, got {width}")
    half = width // 2
    return x[..., :half] * silu(x[..., half:])


def dropout(x: Tensor, p: float, rng: np.random.Generator | None, training: bool) -> Tensor:
    """
    Inverted dropout: zero each entry with probability ``p`` and rescale the rest.

    Identity unless ``training`` and ``p > 0``.

    Raises:
        ContractError: If ``p`` is outside [0, 1) or no generator is given in training
    """
    if not 0.0 <= p < 1.0:
        raise ContractError(f"dropout probability must be in [0, 1), got {p}")
    if not training or p == 0.0:
        return x
    if rng is None:
        raise ContractError("dropout in training mode needs a seeded generator")
    mask = (rng.random(x.shape) >= p) / (1.0 - p)
    return x * Tensor(mask)


def concat(tensors: Sequence[Tensor], axis: int = -1) -> Tensor:
    """Concatenate along ``axis``; the gradient is split back per input."""
    if not tensors:
        raise ContractError("concat needs at least one tensor")
    parts = tuple(ensure_tensor(t) for t in tensors)
    sizes = [t.shape[axis] for t in parts]
    bounds = np.cumsum(sizes)[:-1]

    def backward(g: Array) -> list[Array]:
        return np.split(g, bounds, axis=axis)

    try:
        out = np.concatenate([t.data for t in parts], axis=axis)
    except ValueError as exc:
        raise ShapeError(f"cannot concatenate shapes {[t.shape for t in parts]}") from exc
    return Tensor.from_op(out, parts, backward)


def rotate_pairs(x: Tensor, cos: Array, sin: Array) -> Tensor:
    """
    Rotate each coordinate pair (2k, 2k+1) of the last axis by a fixed angle.

    ``cos`` and ``sin`` hold one value per pair and broadcast against
    ``x[..., ::2]``. The map is orthogonal, so its backward pass is the
    inverse rotation.

    Examples:
        >>> rotate_pairs(Tensor([[1.0, 0.0]]), np.array([[0.0]]), np.array([[1.0]])).data.tolist()
        [[0.0, 1.0]]
    """
    if x.shape[-1] % 2:
        raise ShapeError(f"pairwise rotation needs an even last dimension, got {x.shape[-1]}")
    a = x.data
    even, odd = a[..., 0::2], a[..., 1::2]
    pair_shape = np.broadcast_shapes(even.shape, cos.shape)
    out = np.empty(pair_shape[:-1] + (2 * pair_shape[-1],))
    out[..., 0::2] = even * cos - odd * sin
    out[..., 1::2] = even * sin + odd * cos

    def backward(g: Array) -> tuple[Array]:
        ge, go = g[..., 0::2], g[..., 1::2]
        back = np.empty_like(g)
        back[..., 0::2] = ge * cos + go * sin
        back[..., 1::2] = -ge * sin + go * cos
        return (unbroadcast(back, a.shape),)

    return Tensor.from_op(out, (x,), backward)


def squared_error(prediction: Tensor, target: Tensor | Array) -> Tensor:
    """Elementwise squared difference."""
    diff = prediction - ensure_tensor(target)
    return diff * diff

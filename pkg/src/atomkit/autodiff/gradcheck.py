"""Central finite-difference gradient checking."""

from __future__ import annotations

from collections.abc import Callable, Sequence

import numpy as np

from .tensor import Array, Tensor


def numerical_gradient(loss_fn: Callable[[], Tensor], tensor: Tensor, h: float = 1e-5) -> Array:
    """
    Central-difference estimate of d(loss)/d(tensor).

    ``tensor.data`` is perturbed in place and restored afterwards.
    """
    grad = np.zeros_like(tensor.data)
    flat = tensor.data.reshape(-1)
    out = grad.reshape(-1)
    for i in range(flat.size):
        original = flat[i]
        flat[i] = original + h
        plus = loss_fn().item()
        flat[i] = original - h
        minus = loss_fn().item()
        flat[i] = original
        out[i] = (plus - minus) / (2.0 * h)
    return grad


def relative_error(analytic: Array, numeric: Array, floor: float = 1e-8) -> float:
    """max |a - n| / max(|a| + |n|, floor), elementwise."""
    scale = np.maximum(np.abs(analytic) + np.abs(numeric), floor)
    return float(np.max(np.abs(analytic - numeric) / scale)) if analytic.size else 0.0


def gradcheck(
    loss_fn: Callable[[], Tensor],
    inputs: Sequence[Tensor],
    h: float = 1e-5,
    floor: float = 1e-8,
) -> float:
    """
    Compare autodiff gradients of ``loss_fn`` with finite differences.

    Args:
        loss_fn: Zero-argument callable rebuilding the scalar loss from ``inputs``
        inputs: Leaf tensors with ``requires_grad``
        h: Finite-difference step
        floor: Lower bound of the error denominator, so entries whose true
            gradient is zero compare on an absolute scale

    Returns:
        The worst relative error over all inputs

    Examples:
        >>> x = Tensor([1.0, 2.0], requires_grad=True)
        >>> gradcheck(lambda: (x * x).sum(), [x]) < 1e-6
        True
    """
    for tensor in inputs:
        tensor.zero_grad()
    loss_fn().backward()
    analytic = [t.grad.copy() if t.grad is not None else np.zeros_like(t.data) for t in inputs]
    worst = 0.0
    for tensor, grad in zip(inputs, analytic, strict=True):
        worst = max(worst, relative_error(grad, numerical_gradient(loss_fn, tensor, h), floor))
    return worst

"""
AdamW with the AMSGrad max-moment rule, and global gradient-norm clipping.

The update follows decoupled weight decay: parameters shrink by
``lr * weight_decay`` before the adaptive step, independent of the gradient.
"""

from __future__ import annotations

import math
from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field

import numpy as np

from ..core.errors import ConfigurationError, ContractError, ShapeError
from .tensor import Array, Tensor

# Epsilon values for the single-task and multitask regimes.
SINGLE_TASK_EPS = 1e-10
MULTITASK_EPS = 1e-5


@dataclass
class OptimizerState:
    """
    Moment buffers and hyperparameters for AdamW-AMSGrad.

    Buffers are keyed by parameter name and created lazily on the first step.
    """

    lr: float = 1e-3
    betas: tuple[float, float] = (0.9, 0.999)
    weight_decay: float = 1e-5
    eps: float = SINGLE_TASK_EPS
    step: int = 0
    exp_avg: dict[str, Array] = field(default_factory=dict)
    exp_avg_sq: dict[str, Array] = field(default_factory=dict)
    max_exp_avg_sq: dict[str, Array] = field(default_factory=dict)

    def __post_init__(self) -> None:
        """Validate hyperparameters."""
        beta1, beta2 = self.betas
        if self.lr < 0.0:
            raise ConfigurationError(f"learning rate must be >= 0, got {self.lr}")
        if not (0.0 <= beta1 < 1.0 and 0.0 <= beta2 < 1.0):
            raise ConfigurationError(f"betas must lie in [0, 1), got {self.betas}")
        if self.eps <= 0.0:
            raise ConfigurationError(f"eps must be > 0, got {self.eps}")
        if self.weight_decay < 0.0:
            raise ConfigurationError(f"weight decay must be >= 0, got {self.weight_decay}")


def adamw_amsgrad_step(
    params: Mapping[str, Array],
    grads: Mapping[str, Array | None],
    state: OptimizerState,
) -> None:
    """
    Apply one AdamW-AMSGrad update to ``params`` in place.

    Parameters whose gradient is None are skipped (their buffers are left
    alone). The step counter advances once per call.

    Args:
        params: Parameter arrays by name (mutated)
        grads: Gradients by name, same shapes as ``params``
        state: Moment buffers and hyperparameters (mutated)

    Raises:
        ShapeError: If a gradient does not match its parameter

    Examples:
        >>> p = {"w": np.zeros(1)}
        >>> s = OptimizerState(lr=1e-3, weight_decay=0.0, eps=1e-10)
        >>> adamw_amsgrad_step(p, {"w": np.ones(1)}, s)
        >>> round(float(p["w"][0]), 9)
        -0.001
    """
    beta1, beta2 = state.betas
    state.step += 1
    t = state.step
    bias1 = 1.0 - beta1**t
    bias2_sqrt = math.sqrt(1.0 - beta2**t)

    for name, value in params.items():
        grad = grads.get(name)
        if grad is None:
            continue
        if grad.shape != value.shape:
            raise ShapeError(f"gradient for {name!r} has shape {grad.shape}, expected {value.shape}")
        if name not in state.exp_avg:
            state.exp_avg[name] = np.zeros_like(value)
            state.exp_avg_sq[name] = np.zeros_like(value)
            state.max_exp_avg_sq[name] = np.zeros_like(value)

        if state.weight_decay:
            value *= 1.0 - state.lr * state.weight_decay

        m = state.exp_avg[name]
        v = state.exp_avg_sq[name]
        v_max = state.max_exp_avg_sq[name]
        m *= beta1
        m += (1.0 - beta1) * grad
        v *= beta2
        v += (1.0 - beta2) * grad * grad
        np.maximum(v_max, v, out=v_max)

        denom = np.sqrt(v_max) / bias2_sqrt + state.eps
        value -= (state.lr / bias1) * m / denom


def clip_grad_norm(grads: Sequence[Array | None], max_norm: float) -> float:
    """
    Scale all gradients in place so their global L2 norm is at most ``max_norm``.

    Args:
        grads: Gradient arrays (None entries are ignored)
        max_norm: Positive norm ceiling

    Returns:
        The global norm before clipping

    Raises:
        ContractError: If ``max_norm`` is not positive

    Examples:
        >>> g = [np.array([3.0, 4.0])]
        >>> clip_grad_norm(g, 1.0)
        5.0
        >>> g[0].tolist()
        [0.6, 0.8]
    """
    if max_norm <= 0.0:
        raise ContractError(f"max_norm must be > 0, got {max_norm}")
    present = [g for g in grads if g is not None]
    total = math.sqrt(sum(float(np.sum(g * g)) for g in present))
    if total > max_norm:
        scale = max_norm / total
        for g in present:
            g *= scale
    return total


class AdamWAMSGrad:
    """
    Optimizer over named trainable tensors.

    Examples:
        >>> w = Tensor([1.0], requires_grad=True)
        >>> opt = AdamWAMSGrad({"w": w}, lr=0.1, weight_decay=0.0)
        >>> (w * w).sum().backward()
        >>> _ = opt.step()
        >>> w.data[0] < 1.0
        True
    """

    def __init__(
        self,
        params: Mapping[str, Tensor],
        *,
        lr: float = 1e-3,
        betas: tuple[float, float] = (0.9, 0.999),
        weight_decay: float = 1e-5,
        eps: float = SINGLE_TASK_EPS,
        max_grad_norm: float | None = 1.0,
    ) -> None:
        """Bind to ``params`` and create empty moment buffers."""
        self.params = dict(params)
        self.state = OptimizerState(lr=lr, betas=betas, weight_decay=weight_decay, eps=eps)
        self.max_grad_norm = max_grad_norm

    def zero_grad(self) -> None:
        """Clear accumulated gradients of every parameter."""
        for tensor in self.params.values():
            tensor.zero_grad()

    def step(self) -> float:
        """
        Clip (when configured) and apply one update.

        Returns:
            Global gradient norm before clipping
        """
        grads = [t.grad for t in self.params.values()]
        if self.max_grad_norm is not None:
            norm = clip_grad_norm(grads, self.max_grad_norm)
        else:
            norm = math.sqrt(sum(float(np.sum(g * g)) for g in grads if g is not None))
        adamw_amsgrad_step(
            {name: t.data for name, t in self.params.items()},
            {name: t.grad for name, t in self.params.items()},
            self.state,
        )
        return norm

"""
Heterogeneous temporal attention.

Queries always come from the phase stream Z; keys and values come from each
stream F in {X, V, Z}. The per-stream outputs are weighted by learnable gates
gamma_F and summed:

    sum_F gamma_F softmax(T(Q(Z)) T(K(F))^T / sqrt(d_h)) V(F)

where T is the temporal rotary embedding applied per head.
"""

from __future__ import annotations

import math
from collections.abc import Mapping
from dataclasses import dataclass, field

import numpy as np

from ..autodiff import Tensor, dropout, matmul, softmax
from ..autodiff.tensor import Array
from ..core.errors import ShapeError
from .trope import TropeAngles, apply_trope

STREAMS = ("x", "v", "z")


@dataclass(frozen=True, eq=False)
class AttentionResult:
    """Gated attention output plus the raw per-stream values and weights."""

    output: Tensor
    values: dict[str, Tensor]
    weights: dict[str, Array] = field(default_factory=dict)


def value_residual_mix(v: Tensor, v1: Tensor, alpha: Tensor | float, is_first_layer: bool) -> Tensor:
    """
    Blend a layer's values with the first layer's: ``lam * v + (1 - lam) * v1``.

    ``lam = sigmoid(alpha)``, except in the first layer where it is fixed at 0.5.

    Examples:
        >>> value_residual_mix(Tensor([2.0]), Tensor([0.0]), 0.0, False).data.tolist()
        [1.0]
    """
    if v.shape != v1.shape:
        raise ShapeError(f"value shapes differ: {v.shape} vs {v1.shape}")
    if is_first_layer:
        return (v + v1) * 0.5
    lam = alpha.sigmoid() if isinstance(alpha, Tensor) else Tensor(alpha).sigmoid()
    return lam * v + (1.0 - lam) * v1


def split_heads(x: Tensor, n_heads: int) -> Tensor:
    """``(..., L, d_v) -> (..., H, L, d_h)``."""
    *lead, length, width = x.shape
    if width % n_heads:
        raise ShapeError(f"width {width} is not divisible by {n_heads} heads")
    return x.reshape(*lead, length, n_heads, width // n_heads).swapaxes(-2, -3)


def merge_heads(x: Tensor) -> Tensor:
    """``(..., H, L, d_h) -> (..., L, H * d_h)``."""
    *lead, heads, length, width = x.shape
    return x.swapaxes(-2, -3).reshape(*lead, length, heads * width)


def heterogeneous_attention(
    streams: Mapping[str, Tensor],
    params: Mapping[str, Tensor],
    angles: TropeAngles,
    *,
    n_heads: int,
    training: bool = False,
    dropout_p: float = 0.0,
    rng: np.random.Generator | None = None,
    first_values: Mapping[str, Tensor] | None = None,
    residual_alpha: Tensor | None = None,
    weights_sink: list[Array] | None = None,
) -> AttentionResult:
    """
    One multi-head attention pass with Z as the only query source.

    Args:
        streams: Normalised features by stream name (``"z"`` required; any of
            ``"x"``, ``"v"``); each ``(..., N * P, d_v)``
        params: ``wq`` plus ``wk_<F>``, ``wv_<F>``, ``gamma_<F>`` per stream
        angles: Temporal rotations for the P timesteps
        n_heads: Number of heads
        training: Enables attention dropout
        dropout_p: Dropout probability on the attention weights
        rng: Generator for dropout masks
        first_values: Values of the first block, enabling value residuals
        residual_alpha: Logit of the value-residual weight
        weights_sink: Receives every softmax weight array when given

    Returns:
        The gated sum, the raw values per stream and the attention weights

    Examples:
        >>> z = Tensor(np.ones((1, 2)))
        >>> p = {"wq": Tensor(np.eye(2)), "wk_z": Tensor(np.eye(2)),
        ...      "wv_z": Tensor(np.eye(2)), "gamma_z": Tensor(1.0)}
        >>> heterogeneous_attention({"z": z}, p, TropeAngles.zeros(1, 2), n_heads=1).output.data.tolist()
        [[1.0, 1.0]]
    """
    if "z" not in streams:
        raise ShapeError("attention needs the z stream")
    query = streams["z"] @ params["wq"]
    d_h = query.shape[-1] // n_heads
    q = apply_trope(split_heads(query, n_heads), angles)
    scale = 1.0 / math.sqrt(d_h)
    alpha: Tensor | float = 0.0 if residual_alpha is None else residual_alpha

    outputs: list[Tensor] = []
    values: dict[str, Tensor] = {}
    weights: dict[str, Array] = {}
    for name in STREAMS:
        if name not in streams:
            continue
        feature = streams[name]
        key = apply_trope(split_heads(feature @ params[f"wk_{name}"], n_heads), angles)
        value = feature @ params[f"wv_{name}"]
        values[name] = value
        if first_values is not None:
            value = value_residual_mix(value, first_values[name], alpha, is_first_layer=False)

        attn = softmax(matmul(q, key.T) * scale, axis=-1)
        weights[name] = attn.data
        if weights_sink is not None:
            weights_sink.append(attn.data)
        attn = dropout(attn, dropout_p, rng, training)
        outputs.append(merge_heads(matmul(attn, split_heads(value, n_heads))) * params[f"gamma_{name}"])

    total = outputs[0]
    for extra in outputs[1:]:
        total = total + extra
    return AttentionResult(output=total, values=values, weights=weights)

"""
Temporal rotary embedding.

Angles are ``theta[p, k] = (omega_k / tau) * (t_p - t0)`` with
``omega_k = b ** (-2k / d_h)``. One rotation per timestep is shared by every
atom, so a rotated query/key dot product depends only on ``t_p' - t_p``.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from ..autodiff import Tensor, rotate_pairs
from ..core.errors import ContractError, ShapeError
from ..geometry.state import FloatArray


@dataclass(frozen=True, eq=False)
class TropeAngles:
    """``angles[p, k]`` for P timesteps and ``d_h / 2`` frequencies."""

    angles: FloatArray

    @property
    def n_steps(self) -> int:
        """Number of timesteps P."""
        return int(self.angles.shape[0])

    @property
    def d_h(self) -> int:
        """Head width the angles were built for."""
        return 2 * int(self.angles.shape[1])

    @classmethod
    def zeros(cls, n_steps: int, d_h: int) -> TropeAngles:
        """Identity rotations (used when the embedding is switched off)."""
        return cls(np.zeros((n_steps, d_h // 2)))


def trope_frequencies(d_h: int, base: float) -> FloatArray:
    """``omega_k = base ** (-2k / d_h)`` for k = 0..d_h/2 - 1."""
    return base ** (-2.0 * np.arange(d_h // 2) / d_h)


def trope_angles(
    timestamps: Sequence[float] | FloatArray,
    d_h: int,
    base: float = 1000.0,
    timescale: float = 1.0,
    *,
    t0: float | None = None,
) -> TropeAngles:
    """
    Rotation angles for each query timestamp.

    Args:
        timestamps: P query times
        d_h: Even head width
        base: Frequency base b
        timescale: tau > 0
        t0: Reference time; defaults to the first timestamp

    Returns:
        Angles of shape (P, d_h / 2)

    Raises:
        ContractError: If d_h is odd or base/timescale is not positive

    Examples:
        >>> trope_angles([0.0, np.pi], 2, 1000.0, 1.0, t0=0.0).angles.tolist()
        [[0.0], [3.141592653589793]]
    """
    if d_h < 2 or d_h % 2:
        raise ContractError(f"d_h must be even, got {d_h}")
    if base <= 0.0 or timescale <= 0.0:
        raise ContractError("rope base and timescale must be > 0")
    t = np.asarray(timestamps, dtype=np.float64).reshape(-1)
    reference = t[0] if t0 is None else float(t0)
    return TropeAngles(np.outer(t - reference, trope_frequencies(d_h, base) / timescale))


def apply_trope(x: Tensor, angles: TropeAngles) -> Tensor:
    """
    Rotate coordinate pairs (2k, 2k+1) of every row by the angle of its timestep.

    ``x`` has shape ``(..., N * P, d_h)`` in atom-major timestep blocks, so
    rows ``p * N .. p * N + N - 1`` share timestep p.

    Raises:
        ShapeError: If the rows do not split into P blocks or d_h differs
    """
    rows, width = x.shape[-2], x.shape[-1]
    if width != angles.d_h:
        raise ShapeError(f"head width {width} does not match angles built for d_h={angles.d_h}")
    if rows % angles.n_steps:
        raise ShapeError(f"{rows} rows do not split into {angles.n_steps} timestep blocks")
    per_row = np.repeat(angles.angles, rows // angles.n_steps, axis=0)
    return rotate_pairs(x, np.cos(per_row), np.sin(per_row))

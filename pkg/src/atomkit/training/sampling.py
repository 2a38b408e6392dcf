"""Log-uniform lag sampling and label-noise regularisation."""

from __future__ import annotations

import dataclasses

import numpy as np
from numpy.typing import ArrayLike

from ..core.errors import ContractError
from ..data.loader import WindowBatch
from ..geometry.state import FloatArray, MoleculeState


def sample_loguniform(low: float, high: float, rng: np.random.Generator) -> float:
    """
    ``exp(U)`` with U uniform on ``[ln low, ln high]``.

    Raises:
        ContractError: Unless 0 < low <= high

    Examples:
        >>> sample_loguniform(100.0, 100.0, np.random.default_rng(0))
        100.0
    """
    if not 0.0 < low <= high:
        raise ContractError(f"log-uniform bounds need 0 < low <= high, got ({low}, {high})")
    if low == high:
        return float(low)
    value = float(np.exp(rng.uniform(np.log(low), np.log(high))))
    return min(max(value, low), high)


def add_label_noise(
    state: MoleculeState,
    targets: ArrayLike,
    sigma: float,
    rng: np.random.Generator,
) -> tuple[MoleculeState, FloatArray]:
    """
    Perturb the input kinematics and every target frame with independent N(0, sigma^2) noise.

    Returns the inputs untouched (and draws nothing) when ``sigma`` is 0.

    Raises:
        ContractError: If ``sigma`` < 0
    """
    if sigma < 0.0:
        raise ContractError(f"label noise must be >= 0, got {sigma}")
    y = np.array(targets, dtype=np.float64)
    if sigma == 0.0:
        return state, y
    noisy = state.with_arrays(
        state.positions + rng.normal(0.0, sigma, state.positions.shape),
        state.velocities + rng.normal(0.0, sigma, state.velocities.shape),
    )
    return noisy, y + rng.normal(0.0, sigma, y.shape)


def noise_batch(batch: WindowBatch, sigma: float, rng: np.random.Generator) -> WindowBatch:
    """
    Batched :func:`add_label_noise`.

    One draw per input frame is shared by its P duplicates; targets get an
    independent draw per timestep.
    """
    if sigma < 0.0:
        raise ContractError(f"label noise must be >= 0, got {sigma}")
    if sigma == 0.0:
        return batch
    frame_shape = (batch.positions.shape[0], 1) + batch.positions.shape[2:]
    return dataclasses.replace(
        batch,
        positions=batch.positions + rng.normal(0.0, sigma, frame_shape),
        velocities=batch.velocities + rng.normal(0.0, sigma, frame_shape),
        targets=batch.targets + rng.normal(0.0, sigma, batch.targets.shape),
    )

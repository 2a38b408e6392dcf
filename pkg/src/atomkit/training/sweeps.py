"""
Evaluation harnesses for a trained model.

* horizon sweep: S2T over a log grid of horizons at fixed P
* P sweep: S2T at several discretizations of one horizon
* rotation robustness: S2T on randomly rotated copies of the windows

Sweep rows are written as CSV ``sweep, value, s2s, s2t, baseline_s2t`` for
external plotting.
"""

from __future__ import annotations

import csv
import logging
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ..core.errors import ContractError, DatasetError
from ..data.loader import WindowDataset, frame_offsets, make_batches
from ..data.trajectory import Trajectory
from ..geometry.rotations import random_rotation
from ..geometry.state import FloatArray, IntArray
from ..model.network import AtomModel
from .discretization import discretize
from .metrics import evaluate, frame_errors, static_baseline

logger = logging.getLogger(__name__)

SWEEP_HEADER = ("sweep", "value", "s2s", "s2t", "baseline_s2t")
DEFAULT_P_VALUES = (4, 8, 16)
DEFAULT_GRID_SIZE = 10


@dataclass(frozen=True)
class SweepRow:
    """One evaluated setting."""

    sweep: str
    value: float
    s2s: float
    s2t: float
    baseline_s2t: float

    def as_row(self) -> tuple[str, str, str, str, str]:
        """CSV cells."""
        return (
            self.sweep,
            repr(self.value),
            repr(self.s2s),
            repr(self.s2t),
            repr(self.baseline_s2t),
        )


@dataclass(frozen=True)
class RotationReport:
    """
    S2T with and without random global rotations of the inputs and targets.

    ``ratio`` is ``rotated_s2t / unrotated_s2t``; 1 means the model is
    insensitive to orientation.
    """

    unrotated_s2s: float
    unrotated_s2t: float
    rotated_s2s: float
    rotated_s2t: float
    n_rotations: int

    @property
    def ratio(self) -> float:
        """Rotated over unrotated S2T."""
        return self.rotated_s2t / self.unrotated_s2t if self.unrotated_s2t else float("inf")

    def rows(self, baseline_s2t: float) -> list[SweepRow]:
        """Sweep rows: value 0 is unrotated, value n the mean over n rotations."""
        return [
            SweepRow("rotation", 0.0, self.unrotated_s2s, self.unrotated_s2t, baseline_s2t),
            SweepRow(
                "rotation", float(self.n_rotations), self.rotated_s2s, self.rotated_s2t, baseline_s2t
            ),
        ]


def log_grid(low: float, high: float, n: int = DEFAULT_GRID_SIZE) -> FloatArray:
    """
    ``n`` log-spaced values from ``low`` to ``high`` inclusive.

    Examples:
        >>> log_grid(1.0, 100.0, 3).tolist()
        [1.0, 10.0, 100.0]
    """
    if not 0.0 < low <= high or n < 1:
        raise ContractError(f"log grid needs 0 < low <= high and n >= 1, got ({low}, {high}, {n})")
    return np.geomspace(low, high, n)


def _common_starts(traj: Trajectory, longest_lags: FloatArray, stride: int) -> IntArray:
    offsets = frame_offsets(longest_lags, traj.dt)
    starts = np.arange(0, max(len(traj) - int(offsets[-1]), 0), stride, dtype=np.int64)
    if starts.size == 0:
        raise DatasetError(f"{traj.name} is too short for a lag of {offsets[-1]} frames")
    return starts


def _row(sweep: str, value: float, model: AtomModel, dataset: WindowDataset) -> SweepRow:
    s2s, s2t = evaluate(model, dataset)
    _, baseline_s2t = static_baseline(dataset)
    logger.info("%s=%g: S2S %.6g, S2T %.6g (static %.6g)", sweep, value, s2s, s2t, baseline_s2t)
    return SweepRow(sweep, float(value), s2s, s2t, baseline_s2t)


def delta_t_sweep(
    model: AtomModel,
    traj: Trajectory,
    horizons: Sequence[float],
    n_steps: int,
    *,
    stride: int = 1,
) -> list[SweepRow]:
    """
    S2T as a function of the horizon at fixed P.

    Every horizon is evaluated on the same input frames, those that leave
    room for the longest horizon.

    Raises:
        ContractError: If a horizon is too short for P distinct frames
    """
    if not horizons:
        return []
    longest = discretize("uniform", 0.0, max(horizons), n_steps).lags
    starts = _common_starts(traj, longest, stride)
    rows = []
    for horizon in horizons:
        lags = discretize("uniform", 0.0, horizon, n_steps).lags
        rows.append(_row("deltaT", horizon, model, WindowDataset(traj, lags, starts)))
    return rows


def p_sweep(
    model: AtomModel,
    traj: Trajectory,
    horizon: float,
    n_steps_values: Sequence[int] = DEFAULT_P_VALUES,
    *,
    stride: int = 1,
) -> list[SweepRow]:
    """S2T of one horizon discretized with each P in ``n_steps_values``."""
    rows = []
    for n_steps in n_steps_values:
        lags = discretize("uniform", 0.0, horizon, n_steps).lags
        starts = _common_starts(traj, lags, stride)
        rows.append(_row("P", n_steps, model, WindowDataset(traj, lags, starts)))
    return rows


def s2t_spread(rows: Sequence[SweepRow]) -> float:
    """
    max / min S2T over the rows.

    Examples:
        >>> s2t_spread([SweepRow("P", 4, 0, 1.0, 2), SweepRow("P", 8, 0, 1.5, 2)])
        1.5
    """
    values = [row.s2t for row in rows]
    if not values:
        raise ContractError("no sweep rows")
    low = min(values)
    return max(values) / low if low else float("inf")


def rotation_robustness(
    model: AtomModel,
    dataset: WindowDataset,
    n_rotations: int = 8,
    seed: int = 0,
    batch_size: int = 64,
) -> RotationReport:
    """
    Compare S2T on the original windows with S2T on rotated copies.

    Each rotation is applied about the origin to input positions, input
    velocities and targets alike.
    """
    if n_rotations < 1:
        raise ContractError(f"need at least one rotation, got {n_rotations}")
    unrotated_s2s, unrotated_s2t = evaluate(model, dataset, batch_size)
    rng = np.random.default_rng(seed)
    total_s2s = total_s2t = 0.0
    for _ in range(n_rotations):
        rotation = random_rotation(rng)
        for batch in make_batches(dataset, batch_size):
            pred = model.predict(
                batch.positions @ rotation.T,
                batch.velocities @ rotation.T,
                batch.atomic_numbers,
                batch.lags,
            )
            errors = frame_errors(pred, batch.targets @ rotation.T)
            total_s2s += float(errors[:, -1].sum())
            total_s2t += float(errors.mean(axis=1).sum())
    count = n_rotations * len(dataset)
    report = RotationReport(
        unrotated_s2s, unrotated_s2t, total_s2s / count, total_s2t / count, n_rotations
    )
    logger.info(
        "rotation robustness: S2T %.6g unrotated, %.6g rotated", unrotated_s2t, report.rotated_s2t
    )
    return report


def write_sweep_csv(rows: Iterable[SweepRow], path: str | Path) -> Path:
    """Write sweep rows under the ``sweep, value, s2s, s2t, baseline_s2t`` header."""
    target = Path(path)
    with target.open("w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(SWEEP_HEADER)
        writer.writerows(row.as_row() for row in rows)
    return target

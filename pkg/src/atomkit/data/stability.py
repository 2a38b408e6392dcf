"""Centre-of-mass drift and per-step motion of a trajectory."""

from __future__ import annotations

import csv
from collections.abc import Iterable
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ..core.errors import ContractError
from .trajectory import Trajectory

CSV_HEADER = ("name", "com_drift", "per_step_motion")


@dataclass(frozen=True)
class StabilityReport:
    """
    Attributes:
        name: Trajectory name
        com_drift: Largest distance of the centre of mass from its initial value
        per_step_motion: Mean over steps of the mean atomic displacement per step
    """

    name: str
    com_drift: float
    per_step_motion: float

    def as_row(self) -> tuple[str, str, str]:
        """CSV cells with round-trippable floats."""
        return self.name, repr(self.com_drift), repr(self.per_step_motion)


def stability_metrics(traj: Trajectory) -> StabilityReport:
    """
    Measure drift and motion with unit masses.

    Raises:
        ContractError: If the trajectory has fewer than two frames

    Examples:
        >>> x = np.arange(10.0)[:, None, None] * np.array([[[1.0, 0.0, 0.0]]])
        >>> r = stability_metrics(Trajectory.from_arrays(x, np.zeros_like(x), [6], dt=1.0))
        >>> r.com_drift, r.per_step_motion
        (9.0, 1.0)
    """
    if len(traj) < 2:
        raise ContractError("stability metrics need at least two frames")
    com = traj.positions.mean(axis=1)
    drift = float(np.max(np.linalg.norm(com - com[0], axis=-1)))
    steps = np.linalg.norm(np.diff(traj.positions, axis=0), axis=-1)
    return StabilityReport(traj.name, drift, float(steps.mean(axis=1).mean()))


def write_stability_csv(reports: Iterable[StabilityReport], path: str | Path) -> Path:
    """Write one row per report under the ``name, com_drift, per_step_motion`` header."""
    target = Path(path)
    with target.open("w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        writer.writerows(report.as_row() for report in reports)
    return target

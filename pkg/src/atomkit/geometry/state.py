"""Single-snapshot molecular state."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike, NDArray

from ..core.errors import ShapeError

FloatArray = NDArray[np.float64]
IntArray = NDArray[np.int64]


@dataclass(frozen=True, eq=False)
class MoleculeState:
    """
    One system snapshot: positions, velocities and atomic numbers at ``time``.

    Arrays are copied on construction and marked read-only.

    Examples:
        >>> s = MoleculeState.from_arrays([[0, 0, 0]], [[1, 0, 0]], [6])
        >>> s.n_atoms
        1
    """

    positions: FloatArray
    velocities: FloatArray
    atomic_numbers: IntArray
    time: float = 0.0

    def __post_init__(self) -> None:
        """Validate shapes and freeze the arrays."""
        positions = np.array(self.positions, dtype=np.float64)
        velocities = np.array(self.velocities, dtype=np.float64)
        numbers = np.array(self.atomic_numbers, dtype=np.int64)
        if positions.ndim != 2 or positions.shape[1] != 3 or positions.shape[0] < 1:
            raise ShapeError(f"positions must be N x 3 with N >= 1, got {positions.shape}")
        if velocities.shape != positions.shape:
            raise ShapeError(f"velocities {velocities.shape} do not match positions {positions.shape}")
        if numbers.shape != (positions.shape[0],):
            raise ShapeError(f"atomic_numbers {numbers.shape} do not match {positions.shape[0]} atoms")
        if np.any(numbers < 1):
            raise ShapeError("atomic numbers must be >= 1")
        for array in (positions, velocities, numbers):
            array.setflags(write=False)
        object.__setattr__(self, "positions", positions)
        object.__setattr__(self, "velocities", velocities)
        object.__setattr__(self, "atomic_numbers", numbers)
        object.__setattr__(self, "time", float(self.time))

    @classmethod
    def from_arrays(
        cls,
        positions: ArrayLike,
        velocities: ArrayLike,
        atomic_numbers: ArrayLike,
        time: float = 0.0,
    ) -> MoleculeState:
        """Build a state from array-likes."""
        return cls(np.asarray(positions), np.asarray(velocities), np.asarray(atomic_numbers), time)

    @property
    def n_atoms(self) -> int:
        """Number of atoms N."""
        return int(self.positions.shape[0])

    def rotated(self, rotation: ArrayLike) -> MoleculeState:
        """Apply a 3 x 3 rotation to positions and velocities (x -> R x)."""
        r = np.asarray(rotation, dtype=np.float64)
        return MoleculeState(self.positions @ r.T, self.velocities @ r.T, self.atomic_numbers, self.time)

    def translated(self, shift: ArrayLike) -> MoleculeState:
        """Shift all positions by a 3-vector."""
        return MoleculeState(
            self.positions + np.asarray(shift, dtype=np.float64),
            self.velocities,
            self.atomic_numbers,
            self.time,
        )

    def permuted(self, order: ArrayLike) -> MoleculeState:
        """Reorder atoms so that new atom k is old atom ``order[k]``."""
        idx = np.asarray(order, dtype=np.int64)
        return MoleculeState(
            self.positions[idx], self.velocities[idx], self.atomic_numbers[idx], self.time
        )

    def with_arrays(self, positions: ArrayLike, velocities: ArrayLike) -> MoleculeState:
        """Same atoms and time, new kinematics."""
        return MoleculeState(np.asarray(positions), np.asarray(velocities), self.atomic_numbers, self.time)

"""Fixed-timestep trajectories."""

from __future__ import annotations

from collections.abc import Iterator, Sequence
from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike

from ..core.errors import DatasetError, ShapeError
from ..geometry.state import FloatArray, IntArray, MoleculeState

TIME_TOLERANCE = 1e-9


@dataclass(frozen=True, eq=False)
class Trajectory:
    """
    T frames of one molecule sampled every ``dt``; frame i is at ``t0 + i * dt``.

    Positions and velocities are stored as ``(T, N, 3)`` arrays and exposed
    frame by frame as :class:`MoleculeState`.

    Examples:
        >>> traj = Trajectory.from_arrays(np.zeros((4, 2, 3)), np.zeros((4, 2, 3)), [6, 8], dt=0.5)
        >>> len(traj), traj.frame(3).time
        (4, 1.5)
    """

    positions: FloatArray
    velocities: FloatArray
    atomic_numbers: IntArray
    dt: float
    name: str = "trajectory"
    t0: float = 0.0

    def __post_init__(self) -> None:
        """Validate shapes and freeze the arrays."""
        positions = np.array(self.positions, dtype=np.float64)
        velocities = np.array(self.velocities, dtype=np.float64)
        numbers = np.array(self.atomic_numbers, dtype=np.int64)
        if positions.ndim != 3 or positions.shape[2] != 3:
            raise ShapeError(f"positions must be T x N x 3, got {positions.shape}")
        if positions.shape[0] < 1:
            raise DatasetError("a trajectory needs at least one frame")
        if velocities.shape != positions.shape:
            raise ShapeError(f"velocities {velocities.shape} do not match positions {positions.shape}")
        if numbers.shape != (positions.shape[1],):
            raise ShapeError(f"atomic_numbers {numbers.shape} do not match {positions.shape[1]} atoms")
        if np.any(numbers < 1):
            raise DatasetError("atomic numbers must be >= 1")
        if not self.dt > 0.0:
            raise DatasetError(f"timestep must be > 0, got {self.dt}")
        if not self.name or not self.name.isascii() or any(ch.isspace() for ch in self.name):
            raise DatasetError(f"trajectory name must be a non-empty ASCII word, got {self.name!r}")
        for array in (positions, velocities, numbers):
            array.setflags(write=False)
        object.__setattr__(self, "positions", positions)
        object.__setattr__(self, "velocities", velocities)
        object.__setattr__(self, "atomic_numbers", numbers)
        object.__setattr__(self, "dt", float(self.dt))
        object.__setattr__(self, "t0", float(self.t0))

    @classmethod
    def from_arrays(
        cls,
        positions: ArrayLike,
        velocities: ArrayLike,
        atomic_numbers: ArrayLike,
        dt: float,
        name: str = "trajectory",
        t0: float = 0.0,
    ) -> Trajectory:
        """Build from array-likes."""
        return cls(np.asarray(positions), np.asarray(velocities), np.asarray(atomic_numbers), dt, name, t0)

    @classmethod
    def from_states(cls, states: Sequence[MoleculeState], dt: float, name: str = "trajectory") -> Trajectory:
        """
        Stack snapshots into a trajectory.

        Raises:
            DatasetError: If there are no states, the atoms differ between
                frames, or the frame times are not evenly spaced by ``dt``
        """
        if not states:
            raise DatasetError("a trajectory needs at least one frame")
        first = states[0]
        for index, state in enumerate(states):
            if not np.array_equal(state.atomic_numbers, first.atomic_numbers):
                raise DatasetError(f"frame {index} has different atoms than frame 0")
            expected = first.time + index * dt
            if abs(state.time - expected) > TIME_TOLERANCE * max(1.0, abs(expected)):
                raise DatasetError(f"frame {index} is at t={state.time}, expected {expected}")
        return cls(
            np.stack([s.positions for s in states]),
            np.stack([s.velocities for s in states]),
            first.atomic_numbers,
            dt,
            name,
            first.time,
        )

    def __len__(self) -> int:
        return int(self.positions.shape[0])

    def __iter__(self) -> Iterator[MoleculeState]:
        return (self.frame(i) for i in range(len(self)))

    @property
    def n_atoms(self) -> int:
        """Atoms per frame."""
        return int(self.positions.shape[1])

    @property
    def times(self) -> FloatArray:
        """Frame times ``t0 + i * dt``."""
        return self.t0 + self.dt * np.arange(len(self))

    def frame(self, index: int) -> MoleculeState:
        """Snapshot ``index`` (negative indices count from the end)."""
        i = range(len(self))[index]
        return MoleculeState(self.positions[i], self.velocities[i], self.atomic_numbers, self.t0 + i * self.dt)

    def window(self, start: int, stop: int) -> Trajectory:
        """Frames ``start`` (inclusive) to ``stop`` (exclusive) as a new trajectory."""
        if not 0 <= start < stop <= len(self):
            raise DatasetError(f"invalid frame window [{start}, {stop}) of {len(self)} frames")
        return Trajectory(
            self.positions[start:stop],
            self.velocities[start:stop],
            self.atomic_numbers,
            self.dt,
            self.name,
            self.t0 + start * self.dt,
        )

    def same_frames(self, other: Trajectory) -> bool:
        """Bitwise equality of every array and of the metadata."""
        return (
            self.name == other.name
            and self.dt == other.dt
            and self.t0 == other.t0
            and np.array_equal(self.atomic_numbers, other.atomic_numbers)
            and np.array_equal(self.positions, other.positions)
            and np.array_equal(self.velocities, other.velocities)
        )

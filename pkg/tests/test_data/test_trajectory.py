"""Tests for Trajectory and the ATRJ format."""

from pathlib import Path

import numpy as np
import pytest

from atomkit.core import DatasetError, ShapeError, TrajectoryParseError
from atomkit.data import (
    Trajectory,
    decode_trajectory,
    encode_trajectory,
    load_trajectory,
    save_trajectory,
)
from atomkit.data.atrj import MAGIC_LINE


def test_frames_and_windows(toy_traj: Trajectory) -> None:
    """Test frame access, times and sub-windows."""
    assert len(toy_traj) == 60
    assert toy_traj.n_atoms == 5
    assert toy_traj.frame(-1).time == pytest.approx(59 * 0.05)
    sub = toy_traj.window(10, 20)
    assert len(sub) == 10
    assert sub.t0 == pytest.approx(0.5)
    assert np.array_equal(sub.positions[0], toy_traj.positions[10])
    with pytest.raises(DatasetError):
        toy_traj.window(5, 5)


def test_from_states_checks_spacing(toy_traj: Trajectory) -> None:
    """Test stacked states must be evenly spaced with identical atoms."""
    states = list(toy_traj.window(0, 4))
    rebuilt = Trajectory.from_states(states, toy_traj.dt, "chain")
    assert rebuilt.same_frames(toy_traj.window(0, 4))
    with pytest.raises(DatasetError, match="expected"):
        Trajectory.from_states([states[0], states[2]], toy_traj.dt)
    with pytest.raises(DatasetError):
        Trajectory.from_states([], 0.1)


@pytest.mark.parametrize(
    ("kwargs", "error"),
    [
        ({"dt": 0.0}, DatasetError),
        ({"name": "two words"}, DatasetError),
        ({"name": "m\u00e9thane"}, DatasetError),
        ({"atomic_numbers": [1, 1, 1]}, ShapeError),
    ],
)
def test_invalid_trajectories(kwargs: dict[str, object], error: type[Exception]) -> None:
    """Test bad timesteps, names and atom lists are rejected."""
    values: dict[str, object] = {
        "positions": np.zeros((3, 2, 3)),
        "velocities": np.zeros((3, 2, 3)),
        "atomic_numbers": [1, 6],
        "dt": 0.1,
    }
    values.update(kwargs)
    with pytest.raises(error):
        Trajectory.from_arrays(**values)  # type: ignore[arg-type]


def test_atrj_round_trip_is_exact(toy_traj: Trajectory, tmp_path: Path) -> None:
    """Test write-then-read preserves every bit and re-encodes identically."""
    path = save_trajectory(toy_traj, tmp_path / "chain.atrj")
    loaded = load_trajectory(path)
    assert loaded.same_frames(toy_traj)
    assert encode_trajectory(loaded) == path.read_bytes()


def test_atrj_header_layout() -> None:
    """Test the three ASCII header lines."""
    traj = Trajectory.from_arrays(np.zeros((2, 1, 3)), np.ones((2, 1, 3)), [8], dt=0.1, name="water")
    blob = encode_trajectory(traj)
    header = blob.split(b"\n", 3)
    assert header[0] == MAGIC_LINE
    assert header[1] == b"1 2 0.1 water"
    assert header[2] == b"8"
    assert len(header[3]) == 2 * 1 * 6 * 8


@pytest.mark.parametrize(
    ("blob", "line"),
    [
        (b"ATRJ 2\n1 1 0.1 x\n1\n", 1),
        (b"ATRJ 1\n1 1 x\n1\n", 2),
        (b"ATRJ 1\n0 1 0.1 x\n\n", 2),
        (b"ATRJ 1\n2 1 0.1 x\n1\n", 3),
        (b"ATRJ 1\n1 1 0.1 x\nH\n", 3),
        (b"ATRJ 1", 1),
    ],
)
def test_malformed_headers(blob: bytes, line: int) -> None:
    """Test header errors name the offending line."""
    with pytest.raises(TrajectoryParseError) as excinfo:
        decode_trajectory(blob)
    assert excinfo.value.line == line


def test_truncated_payload(toy_traj: Trajectory, tmp_path: Path) -> None:
    """Test a short payload reports the frames it found."""
    blob = encode_trajectory(toy_traj)[:-8]
    with pytest.raises(TrajectoryParseError, match="header says 60"):
        decode_trajectory(blob)
    with pytest.raises(TrajectoryParseError, match="cannot read"):
        load_trajectory(tmp_path / "missing.atrj")

"""Tests for the horizon, P and rotation evaluation harnesses."""

import dataclasses

import numpy as np
import pytest

from atomkit.core import ContractError, DatasetError
from atomkit.data import Trajectory, WindowDataset
from atomkit.model import AtomModel, AtomModelConfig
from atomkit.training import (
    SweepRow,
    delta_t_sweep,
    log_grid,
    p_sweep,
    rotation_robustness,
    s2t_spread,
    write_sweep_csv,
)


def test_p_sweep_rows(tiny_model: AtomModel, toy_traj: Trajectory) -> None:
    """Test one row per P with the sweep name and value."""
    rows = p_sweep(tiny_model, toy_traj, 0.8, stride=4)
    assert [row.sweep for row in rows] == ["P"] * 3
    assert [row.value for row in rows] == [4.0, 8.0, 16.0]
    assert all(np.isfinite(row.s2t) and row.baseline_s2t > 0 for row in rows)


def test_delta_t_sweep_shares_input_frames(tiny_config: AtomModelConfig, toy_traj: Trajectory) -> None:
    """Test every horizon is scored, and an untrained model matches the static predictor."""
    model = AtomModel.initialize(tiny_config, np.random.default_rng(0))
    rows = delta_t_sweep(model, toy_traj, [0.2, 0.4], 4, stride=3)
    assert [(row.sweep, row.value) for row in rows] == [("deltaT", 0.2), ("deltaT", 0.4)]
    for row in rows:
        assert row.s2t == pytest.approx(row.baseline_s2t)
    assert rows[0].baseline_s2t < rows[1].baseline_s2t
    assert delta_t_sweep(model, toy_traj, [], 4) == []


def test_sweep_rejects_impossible_settings(tiny_model: AtomModel, toy_traj: Trajectory) -> None:
    """Test horizons past the trajectory or finer than a frame are refused."""
    with pytest.raises(DatasetError, match="too short"):
        p_sweep(tiny_model, toy_traj, 5.0, (4,))
    with pytest.raises(ContractError):
        delta_t_sweep(tiny_model, toy_traj, [0.1], 4)


def test_rotation_robustness_of_canonicalized_model(
    tiny_config: AtomModelConfig, toy_traj: Trajectory
) -> None:
    """Test a canonicalized model scores the same on rotated windows."""
    config = dataclasses.replace(tiny_config, mode="canonicalized")
    model = AtomModel.initialize(config, np.random.default_rng(0))
    model.head["w_out"].data[...] = np.random.default_rng(1).normal(0.0, 0.1, (16, 3))
    dataset = WindowDataset(toy_traj, [0.1, 0.2], np.arange(0, 50, 10))

    report = rotation_robustness(model, dataset, n_rotations=3, seed=2)
    assert report.n_rotations == 3
    assert report.ratio == pytest.approx(1.0, rel=1e-6)
    rows = report.rows(baseline_s2t=1.0)
    assert [row.value for row in rows] == [0.0, 3.0]
    with pytest.raises(ContractError):
        rotation_robustness(model, dataset, n_rotations=0)


def test_rotation_robustness_exposes_quasi_model(tiny_model: AtomModel, toy_traj: Trajectory) -> None:
    """Test an unconstrained model changes its error under rotation."""
    dataset = WindowDataset(toy_traj, [0.1, 0.2], np.arange(0, 50, 10))
    report = rotation_robustness(tiny_model, dataset, n_rotations=2, seed=2)
    assert report.ratio != pytest.approx(1.0, rel=1e-9)


def test_log_grid_and_spread() -> None:
    """Test the grid is inclusive and the spread is max over min."""
    grid = log_grid(0.1, 10.0, 5)
    assert grid[0] == pytest.approx(0.1)
    assert grid[-1] == pytest.approx(10.0)
    assert np.allclose(np.diff(np.log(grid)), np.log(10.0) / 2)
    rows = [SweepRow("P", 4, 0.0, 2.0, 1.0), SweepRow("P", 8, 0.0, 3.0, 1.0)]
    assert s2t_spread(rows) == pytest.approx(1.5)
    with pytest.raises(ContractError):
        s2t_spread([])
    with pytest.raises(ContractError):
        log_grid(0.0, 1.0)


def test_write_sweep_csv(tmp_path) -> None:
    """Test the CSV header and exact float cells."""
    path = write_sweep_csv([SweepRow("P", 4, 0.25, 0.5, 1.0)], tmp_path / "sweep.csv")
    assert path.read_text().splitlines() == [
        "sweep,value,s2s,s2t,baseline_s2t",
        "P,4,0.25,0.5,1.0",
    ]

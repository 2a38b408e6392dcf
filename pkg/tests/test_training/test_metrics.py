"""Tests for S2T and S2S errors."""

import numpy as np
import pytest

from atomkit.autodiff import Tensor
from atomkit.core import ShapeError
from atomkit.data import Trajectory, WindowDataset
from atomkit.model import AtomModel, AtomModelConfig
from atomkit.training import evaluate, frame_errors, s2s_mse, s2t_loss, s2t_mse, static_baseline


def test_two_frame_example() -> None:
    """Test frame errors 2 and 4 give S2T 3 and S2S 4."""
    truth = np.zeros((2, 1, 3))
    pred = np.array([[[1.0, 1.0, 0.0]], [[2.0, 0.0, 0.0]]])
    assert frame_errors(pred, truth).tolist() == [2.0, 4.0]
    assert s2t_mse(pred, truth) == 3.0
    assert s2s_mse(pred, truth) == 4.0


def test_batched_errors_average_over_windows() -> None:
    """Test a leading batch axis averages per-window scores."""
    truth = np.zeros((2, 2, 1, 3))
    pred = np.zeros((2, 2, 1, 3))
    pred[0, 1, 0, 0] = 2.0
    assert s2s_mse(pred, truth) == 2.0
    assert s2t_mse(pred, truth) == 1.0


def test_s2t_loss_matches_numpy() -> None:
    """Test the differentiable loss equals the numpy metric."""
    rng = np.random.default_rng(0)
    pred = rng.normal(size=(3, 4, 2, 3))
    truth = rng.normal(size=(3, 4, 2, 3))
    assert s2t_loss(Tensor(pred), truth).item() == pytest.approx(s2t_mse(pred, truth))


def test_shape_checks() -> None:
    """Test mismatched or non-frame arrays raise ShapeError."""
    with pytest.raises(ShapeError):
        frame_errors(np.zeros((2, 1, 3)), np.zeros((3, 1, 3)))
    with pytest.raises(ShapeError):
        frame_errors(np.zeros((2, 3)), np.zeros((2, 3)))


def test_identity_model_scores_like_the_static_baseline(toy_traj: Trajectory) -> None:
    """Test a freshly initialised delta model equals the static predictor."""
    config = AtomModelConfig(d_v=16, n_layers=1, n_heads=2, d_h=8)
    model = AtomModel.initialize(config, np.random.default_rng(0))
    dataset = WindowDataset(toy_traj, [0.1, 0.2, 0.3])
    s2s, s2t = evaluate(model, dataset, batch_size=7)
    baseline_s2s, baseline_s2t = static_baseline(dataset)
    assert s2s == pytest.approx(baseline_s2s)
    assert s2t == pytest.approx(baseline_s2t)
    assert baseline_s2t > 0.0

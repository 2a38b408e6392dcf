"""Tests for the temporal rotary embedding."""

import numpy as np
import pytest

from atomkit.autodiff import Tensor
from atomkit.core import ContractError, ShapeError
from atomkit.model import TropeAngles, apply_trope, trope_angles, trope_frequencies


def test_frequencies() -> None:
    """Test omega_k = b^(-2k/d_h)."""
    assert np.allclose(trope_frequencies(4, 100.0), [1.0, 0.1])


def test_angles_default_reference_is_first_timestamp() -> None:
    """Test angles start at zero for the first timestamp."""
    angles = trope_angles([2.0, 3.0], 4, 100.0, 2.0)
    assert np.allclose(angles.angles, [[0.0, 0.0], [0.5, 0.05]])


def test_invalid_arguments() -> None:
    """Test odd widths and non-positive scales are rejected."""
    with pytest.raises(ContractError):
        trope_angles([0.0], 3)
    with pytest.raises(ContractError):
        trope_angles([0.0], 4, timescale=0.0)
    with pytest.raises(ShapeError):
        apply_trope(Tensor(np.zeros((6, 4))), TropeAngles.zeros(4, 4))
    with pytest.raises(ShapeError):
        apply_trope(Tensor(np.zeros((6, 6))), TropeAngles.zeros(2, 4))


def test_scores_depend_only_on_time_differences() -> None:
    """Test rotated query-key products are invariant to a common time shift."""
    rng = np.random.default_rng(0)
    d_h, n_atoms = 8, 3
    times = np.array([0.2, 0.9, 1.7])
    q = Tensor(rng.normal(size=(n_atoms * times.size, d_h)))
    k = Tensor(rng.normal(size=(n_atoms * times.size, d_h)))

    def scores(t: np.ndarray) -> np.ndarray:
        angles = trope_angles(t, d_h, 1000.0, 1.0, t0=0.0)
        return apply_trope(q, angles).data @ apply_trope(k, angles).data.T

    assert np.allclose(scores(times), scores(times + 123.4))
    assert not np.allclose(scores(times), scores(times * 2.0))


def test_rows_of_one_timestep_share_a_rotation() -> None:
    """Test atom-major blocks: every atom of timestep p is rotated alike."""
    x = Tensor(np.tile([[1.0, 0.0]], (4, 1)))
    out = apply_trope(x, TropeAngles(np.array([[0.0], [np.pi / 2]]))).data
    assert np.allclose(out[:2], [[1.0, 0.0], [1.0, 0.0]])
    assert np.allclose(out[2:], [[0.0, 1.0], [0.0, 1.0]])

"""Tests for channel lifting."""

import numpy as np
import pytest

from atomkit.core import ConfigurationError, ContractError, ShapeError
from atomkit.geometry import (
    ChannelLayout,
    Lift,
    MoleculeState,
    augment_with_norm,
    duplicate_state,
    equivariant_lift,
    random_rotation,
)


def _state(seed: int = 0) -> MoleculeState:
    rng = np.random.default_rng(seed)
    return MoleculeState.from_arrays(rng.normal(size=(4, 3)), rng.normal(size=(4, 3)), [1, 6, 7, 8])


def test_channel_layout() -> None:
    """Test the width split and its error cases."""
    layout = ChannelLayout.for_width(24, reserved=4)
    assert layout.vector_width == 12
    assert layout.n_scalars == 12
    assert layout.n_free_scalars == 8
    assert layout.reserved_slice == slice(20, 24)
    with pytest.raises(ConfigurationError):
        ChannelLayout.for_width(4)
    with pytest.raises(ConfigurationError):
        ChannelLayout.for_width(12, reserved=6)


def test_augment_with_norm_shape_error() -> None:
    """Test non-3-vectors are rejected."""
    with pytest.raises(ShapeError):
        augment_with_norm([1.0, 2.0])


def test_registry() -> None:
    """Test lifts register under their names."""
    assert Lift.available() == ["equivariant", "linear"]
    with pytest.raises(ConfigurationError, match="unknown lifting"):
        Lift.create("spherical", ChannelLayout.for_width(12), np.random.default_rng(0))


def test_row_layout_is_atom_major_within_timesteps() -> None:
    """Test row p * N + i holds atom i at every timestep p."""
    lift = Lift.create("equivariant", ChannelLayout.for_width(12), np.random.default_rng(0))
    embedding = equivariant_lift(_state(), 3, lift)
    z = embedding.z.data
    assert z.shape == (12, 12)
    assert np.allclose(z[0:4], z[4:8])
    assert np.allclose(z[4:8], z[8:12])


@pytest.mark.parametrize("seed", [1, 2, 3])
def test_equivariant_lift_rotates_vectors_and_keeps_scalars(seed: int) -> None:
    """Test vector triples rotate with the input and scalar channels are invariant."""
    layout = ChannelLayout.for_width(20, reserved=2)
    lift = Lift.create("equivariant", layout, np.random.default_rng(0))
    state = _state()
    r = random_rotation(seed)
    base = equivariant_lift(state, 2, lift)
    turned = equivariant_lift(state.rotated(r), 2, lift)
    for stream_a, stream_b in ((base.x, turned.x), (base.v, turned.v), (base.z, turned.z)):
        a, b = stream_a.data, stream_b.data
        vectors_a = a[:, layout.vector_slice].reshape(-1, layout.n_vectors, 3)
        vectors_b = b[:, layout.vector_slice].reshape(-1, layout.n_vectors, 3)
        assert np.allclose(vectors_b, vectors_a @ r.T)
        assert np.allclose(a[:, layout.scalar_slice], b[:, layout.scalar_slice])
    assert np.array_equal(base.z.data[:, layout.reserved_slice], np.zeros((8, 2)))


def test_linear_lift_is_not_equivariant() -> None:
    """Test the plain linear lift changes under rotation."""
    lift = Lift.create("linear", ChannelLayout.for_width(12), np.random.default_rng(0))
    state = _state()
    base = equivariant_lift(state, 1, lift)
    turned = equivariant_lift(state.rotated(random_rotation(3)), 1, lift)
    assert not np.allclose(base.x.data, turned.x.data)


def test_block_validation() -> None:
    """Test bad blocks and atomic numbers are rejected."""
    lift = Lift.create("equivariant", ChannelLayout.for_width(12), np.random.default_rng(0))
    with pytest.raises(ShapeError):
        lift(np.zeros((2, 3)), np.zeros((2, 3)), [1, 1])
    with pytest.raises(ContractError):
        lift(np.zeros((1, 1, 2, 3)), np.zeros((1, 1, 2, 3)), [1, 119])
    with pytest.raises(ContractError):
        duplicate_state(_state(), 0)

"""Tests for binary checkpoints."""

from pathlib import Path

import numpy as np
import pytest

from atomkit.autodiff import MAGIC, load_checkpoint, save_checkpoint
from atomkit.autodiff.checkpoint import encode_parameters
from atomkit.core import CheckpointError


def test_layout_of_a_single_parameter() -> None:
    """Test the byte layout: magic, name, rank, dims, float64 values."""
    blob = encode_parameters({"b": np.array([1.0, 2.0])})
    expected = (
        MAGIC
        + (1).to_bytes(4, "little")
        + b"b"
        + (1).to_bytes(4, "little")
        + (2).to_bytes(4, "little")
        + np.array([1.0, 2.0], dtype="<f8").tobytes()
    )
    assert blob == expected


def test_save_and_load_preserve_order_and_values(tmp_path: Path) -> None:
    """Test parameters come back bit-identical and in order."""
    rng = np.random.default_rng(0)
    params = {"z.w": rng.normal(size=(3, 2)), "a.gain": rng.normal(size=4), "s": np.array(2.5)}
    path = save_checkpoint(tmp_path / "model.ckpt", params)
    loaded = load_checkpoint(path)
    assert list(loaded) == list(params)
    for name, value in params.items():
        assert np.array_equal(loaded[name], value)
        assert loaded[name].shape == value.shape


def test_bad_magic_and_truncation(tmp_path: Path) -> None:
    """Test malformed files raise CheckpointError."""
    bad = tmp_path / "bad.ckpt"
    bad.write_bytes(b"NOTACKPT")
    with pytest.raises(CheckpointError, match="magic"):
        load_checkpoint(bad)

    truncated = tmp_path / "short.ckpt"
    truncated.write_bytes(encode_parameters({"w": np.ones(4)})[:-3])
    with pytest.raises(CheckpointError, match="truncated"):
        load_checkpoint(truncated)

    with pytest.raises(CheckpointError, match="cannot read"):
        load_checkpoint(tmp_path / "missing.ckpt")

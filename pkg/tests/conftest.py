"""Shared fixtures: seeded generators, a tiny operator and short toy trajectories."""

import logging
from collections.abc import Iterator

import numpy as np
import pytest

from atomkit.core.log import PACKAGE_LOGGER
from atomkit.data import Trajectory, generate_toy_trajectory
from atomkit.model import AtomModel, AtomModelConfig


@pytest.fixture(autouse=True)
def reset_package_logger() -> Iterator[None]:
    """Undo CLI logging setup so caplog sees package records in every test."""
    yield
    logger = logging.getLogger(PACKAGE_LOGGER)
    for handler in [h for h in logger.handlers if getattr(h, "_atomkit_handler", False)]:
        logger.removeHandler(handler)
    logger.setLevel(logging.NOTSET)
    logger.propagate = True


@pytest.fixture
def rng() -> np.random.Generator:
    """Seeded generator."""
    return np.random.default_rng(0)


@pytest.fixture
def tiny_config() -> AtomModelConfig:
    """Smallest sensible architecture."""
    return AtomModelConfig(d_v=16, n_layers=2, n_heads=2, d_h=8, mlp_hidden_multiple=1)


@pytest.fixture
def tiny_model(tiny_config: AtomModelConfig) -> AtomModel:
    """Tiny model whose output head is not zero, so predictions depend on every layer."""
    model = AtomModel.initialize(tiny_config, np.random.default_rng(0))
    model.head["w_out"].data[...] = np.random.default_rng(1).normal(0.0, 0.1, size=(16, 3))
    return model


@pytest.fixture
def toy_traj() -> Trajectory:
    """60 frames of a 5-atom spring chain at dt = 0.05."""
    return generate_toy_trajectory("pairwise-spring", 5, 60, 0.05, seed=0, name="chain")

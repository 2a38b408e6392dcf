"""Tests for query-time discretization."""

import pytest

from atomkit.core import ConfigurationError, ContractError
from atomkit.training import DiscretizationStrategy, discretize


def test_uniform_plan() -> None:
    """Test P evenly spaced times ending at the horizon."""
    plan = discretize("uniform", 0.0, 3000.0, 8)
    assert plan.timestamps.tolist() == [375.0, 750.0, 1125.0, 1500.0, 1875.0, 2250.0, 2625.0, 3000.0]
    assert plan.lags.tolist() == plan.timestamps.tolist()


def test_plan_from_a_later_input_time() -> None:
    """Test timestamps are offset by the input time and lags are not."""
    plan = discretize("uniform", 10.0, 4.0, 2)
    assert plan.timestamps.tolist() == [12.0, 14.0]
    assert plan.lags.tolist() == [2.0, 4.0]
    assert plan.shifted(0.0).timestamps.tolist() == [2.0, 4.0]


def test_tail_plan() -> None:
    """Test only the end of the horizon is sampled."""
    plan = discretize("tail", 0.0, 10.0, 4, tail_lag=6.0)
    assert plan.lags.tolist() == [7.0, 8.0, 9.0, 10.0]


def test_single_step_is_the_horizon() -> None:
    """Test P = 1 queries the horizon only."""
    assert discretize("uniform", 1.0, 2.5, 1).timestamps.tolist() == [3.5]


@pytest.mark.parametrize(
    ("args", "error"),
    [
        (("uniform", 0.0, 1.0, 0), ContractError),
        (("uniform", 0.0, 0.0, 4), ContractError),
        (("tail", 0.0, 1.0, 4, 1.0), ContractError),
        (("cosine", 0.0, 1.0, 4), ConfigurationError),
    ],
)
def test_invalid_plans(args: tuple[object, ...], error: type[Exception]) -> None:
    """Test bad P, horizons, tail lags and strategy names."""
    with pytest.raises(error):
        discretize(*args)  # type: ignore[arg-type]


def test_registry_holds_both_strategies() -> None:
    """Test strategies register under their names."""
    assert DiscretizationStrategy.available() == ["tail", "uniform"]
    assert DiscretizationStrategy.get("tail").name == "tail"

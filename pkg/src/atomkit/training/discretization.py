"""
Choice of the P query times inside the horizon.

``uniform``: ``t_p = t + (p / P) * dT``.
``tail``:    ``t_p = t + tail + (p / P) * (dT - tail)``; only the end of the
horizon is sampled.
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import ClassVar

import numpy as np

from ..core.errors import ConfigurationError, ContractError
from ..geometry.state import FloatArray


class DiscretizationStrategy(ABC):
    """Maps (P, horizon, tail lag) to lags measured from the input frame."""

    _registry: ClassVar[dict[str, DiscretizationStrategy]] = {}
    name: ClassVar[str]

    def __init_subclass__(cls, *, name: str, **kwargs: object) -> None:
        """Register one shared instance under ``name``."""
        super().__init_subclass__(**kwargs)
        cls.name = name
        DiscretizationStrategy._registry[name] = cls()

    @classmethod
    def get(cls, name: str) -> DiscretizationStrategy:
        """
        Look up a strategy.

        Raises:
            ConfigurationError: For an unknown name
        """
        try:
            return cls._registry[name]
        except KeyError:
            raise ConfigurationError(
                f"unknown discretization {name!r}; choose from {sorted(cls._registry)}"
            ) from None

    @classmethod
    def available(cls) -> list[str]:
        """Registered strategy names."""
        return sorted(cls._registry)

    @abstractmethod
    def lags(self, n_steps: int, horizon: float, tail_lag: float) -> FloatArray:
        """Lags ``t_p - t`` for p = 1..P."""


class UniformDiscretization(DiscretizationStrategy, name="uniform"):
    """Evenly spaced over the whole horizon."""

    def lags(self, n_steps: int, horizon: float, tail_lag: float) -> FloatArray:
        """(p / P) * horizon."""
        return np.arange(1, n_steps + 1) / n_steps * horizon


class TailDiscretization(DiscretizationStrategy, name="tail"):
    """Evenly spaced over ``(tail_lag, horizon]``."""

    def lags(self, n_steps: int, horizon: float, tail_lag: float) -> FloatArray:
        """tail + (p / P) * (horizon - tail)."""
        return tail_lag + np.arange(1, n_steps + 1) / n_steps * (horizon - tail_lag)


@dataclass(frozen=True, eq=False)
class DiscretizationPlan:
    """Query times for one input time ``start``."""

    strategy: str
    n_steps: int
    horizon: float
    tail_lag: float
    start: float
    timestamps: FloatArray

    @property
    def lags(self) -> FloatArray:
        """``timestamps - start``."""
        return self.timestamps - self.start

    def shifted(self, start: float) -> DiscretizationPlan:
        """The same lags from another input time."""
        return DiscretizationPlan(
            self.strategy, self.n_steps, self.horizon, self.tail_lag, start, self.lags + start
        )


def discretize(
    strategy: str, t: float, horizon: float, n_steps: int, tail_lag: float = 0.0
) -> DiscretizationPlan:
    """
    Build the query times of one window.

    Args:
        strategy: ``"uniform"`` or ``"tail"``
        t: Input time
        horizon: Total horizon dT > 0
        n_steps: P >= 1
        tail_lag: Start of the sampled tail, 0 <= tail_lag < dT

    Raises:
        ContractError: On invalid P, horizon or tail lag
        ConfigurationError: For an unknown strategy

    Examples:
        >>> discretize("uniform", 0.0, 3000.0, 8).timestamps.tolist()[:2]
        [375.0, 750.0]
    """
    if n_steps < 1:
        raise ContractError(f"P must be >= 1, got {n_steps}")
    if not horizon > 0.0:
        raise ContractError(f"horizon must be > 0, got {horizon}")
    if not 0.0 <= tail_lag < horizon:
        raise ContractError(f"tail lag must satisfy 0 <= tail < horizon, got {tail_lag} vs {horizon}")
    lags = DiscretizationStrategy.get(strategy).lags(n_steps, float(horizon), float(tail_lag))
    return DiscretizationPlan(strategy, n_steps, float(horizon), float(tail_lag), float(t), t + lags)

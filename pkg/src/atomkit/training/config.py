"""Hyperparameters of a training run."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any

from ..autodiff.optim import MULTITASK_EPS, SINGLE_TASK_EPS
from ..core.config import from_mapping, to_mapping
from ..core.errors import ConfigurationError
from .discretization import DiscretizationStrategy


@dataclass(frozen=True)
class TrainRunConfig:
    """
    Everything a training loop needs besides the data and the model.

    Times share the unit of the trajectory's ``dt``. Early stopping always
    tracks the mean validation S2S.

    Attributes:
        batch_size: Windows per optimizer step
        epochs: Number of passes over the training windows
        label_noise: Standard deviation of the Gaussian label noise. The 0.01
            default suits the unit-length toy molecules; 0.1 is the usual value
            for real molecules in angstrom
        horizon: Prediction horizon dT (largest lag)
        n_steps: Query timestamps P per window
        discretization: ``"uniform"`` or ``"tail"``
        tail_lag: Start of the sampled tail for tail discretization
        dt_min: Lower bound of the log-uniform horizon draw (multitask only)
        seed: Seed of the run's single generator
        lr: Learning rate (constant)
        betas: Adam moment decay rates
        weight_decay: Decoupled weight decay
        eps: Adam epsilon
        max_grad_norm: Global gradient-norm clip, or None
        n_train: Training windows per trajectory (None: the rest)
        n_val: Validation windows per trajectory (None: 10%)
        n_test: Test windows per trajectory
        stride: Frames between consecutive window starts
        show_progress: Draw a tqdm bar over epochs
        prefetch: Assemble batches on a background thread

    Examples:
        >>> TrainRunConfig(epochs=3).epochs
        3
        >>> TrainRunConfig(label_noise=-1.0)
        Traceback (most recent call last):
        ...
        atomkit.core.errors.ConfigurationError: label_noise must be >= 0, got -1.0
    """

    batch_size: int = 16
    epochs: int = 50
    label_noise: float = 0.01
    horizon: float = 2.0
    n_steps: int = 8
    discretization: str = "uniform"
    tail_lag: float = 0.0
    dt_min: float | None = None
    seed: int = 0
    lr: float = 1e-3
    betas: tuple[float, float] = (0.9, 0.999)
    weight_decay: float = 1e-5
    eps: float = SINGLE_TASK_EPS
    max_grad_norm: float | None = 1.0
    n_train: int | None = None
    n_val: int | None = None
    n_test: int = 0
    stride: int = 1
    show_progress: bool = False
    prefetch: bool = False

    def __post_init__(self) -> None:
        """Validate ranges."""
        if self.batch_size < 1:
            raise ConfigurationError(f"batch_size must be >= 1, got {self.batch_size}")
        if self.epochs < 0:
            raise ConfigurationError(f"epochs must be >= 0, got {self.epochs}")
        if self.label_noise < 0.0:
            raise ConfigurationError(f"label_noise must be >= 0, got {self.label_noise}")
        if not self.horizon > 0.0:
            raise ConfigurationError(f"horizon must be > 0, got {self.horizon}")
        if self.n_steps < 1:
            raise ConfigurationError(f"n_steps must be >= 1, got {self.n_steps}")
        if self.discretization not in DiscretizationStrategy.available():
            raise ConfigurationError(
                f"unknown discretization {self.discretization!r}; "
                f"choose from {DiscretizationStrategy.available()}"
            )
        if not 0.0 <= self.tail_lag < self.horizon:
            raise ConfigurationError(
                f"tail_lag must satisfy 0 <= tail_lag < horizon, got {self.tail_lag}"
            )
        if self.dt_min is not None and not 0.0 < self.dt_min <= self.horizon:
            raise ConfigurationError(
                f"dt_min must satisfy 0 < dt_min <= horizon, got {self.dt_min}"
            )
        if self.max_grad_norm is not None and self.max_grad_norm <= 0.0:
            raise ConfigurationError(f"max_grad_norm must be > 0, got {self.max_grad_norm}")
        if self.n_test < 0 or self.stride < 1:
            raise ConfigurationError(f"need n_test >= 0 and stride >= 1, got {self.n_test}, {self.stride}")

    @classmethod
    def multitask(cls, **values: Any) -> TrainRunConfig:
        """Defaults for the multitask regime (larger Adam epsilon)."""
        values.setdefault("eps", MULTITASK_EPS)
        return cls(**values)

    @classmethod
    def from_dict(cls, mapping: dict[str, Any], **overrides: Any) -> TrainRunConfig:
        """Build from a JSON ``"train"`` section; non-None overrides win."""
        return from_mapping(cls, mapping, **overrides)

    def to_dict(self) -> dict[str, Any]:
        """JSON-ready mapping."""
        return to_mapping(self)

"""
State-to-trajectory (S2T) and state-to-state (S2S) errors.

For one window with P predicted frames, S2T is the mean over frames of the
squared L2 error of the whole frame, and S2S is that error at the last frame.
Batched inputs average over windows.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from numpy.typing import ArrayLike

from ..autodiff.tensor import Tensor, ensure_tensor
from ..core.errors import ShapeError
from ..data.loader import WindowBatch, WindowDataset, make_batches
from ..geometry.state import FloatArray
from ..model.network import AtomModel


def frame_errors(pred: ArrayLike, truth: ArrayLike) -> FloatArray:
    """Squared L2 error of every frame, shape ``(..., P)``."""
    p = np.asarray(pred, dtype=np.float64)
    t = np.asarray(truth, dtype=np.float64)
    if p.shape != t.shape:
        raise ShapeError(f"prediction {p.shape} and truth {t.shape} differ")
    if p.ndim < 3 or p.shape[-1] != 3:
        raise ShapeError(f"expected (..., P, N, 3) frames, got {p.shape}")
    return ((p - t) ** 2).sum(axis=(-1, -2))


def s2t_mse(pred: ArrayLike, truth: ArrayLike) -> float:
    """
    Mean over frames (and windows) of the squared frame error.

    Examples:
        >>> truth = np.zeros((2, 1, 3))
        >>> pred = np.array([[[1.0, 1.0, 0.0]], [[2.0, 0.0, 0.0]]])
        >>> s2t_mse(pred, truth), s2s_mse(pred, truth)
        (3.0, 4.0)
    """
    return float(frame_errors(pred, truth).mean())


def s2s_mse(pred: ArrayLike, truth: ArrayLike) -> float:
    """Squared error of the last frame (averaged over windows)."""
    return float(frame_errors(pred, truth)[..., -1].mean())


def s2t_loss(pred: Tensor, truth: ArrayLike) -> Tensor:
    """Differentiable S2T, averaged over the batch."""
    diff = pred - ensure_tensor(np.asarray(truth, dtype=np.float64))
    return (diff * diff).sum(axis=(-1, -2)).mean()


@dataclass(frozen=True)
class EpochRecord:
    """One row of the metrics CSV."""

    epoch: int
    train_loss: float
    val_s2s: float
    val_s2t: float


@dataclass(frozen=True)
class MetricsReport:
    """
    Outcome of a training or evaluation run.

    Attributes:
        s2s: Validation S2S of the returned parameters
        s2t: Validation S2T of the returned parameters
        baseline_s2s: S2S of the static predictor on the same windows
        baseline_s2t: S2T of the static predictor on the same windows
        epochs: Per-epoch records
        best_epoch: Epoch whose parameters were kept (0 if none)
        seconds: Wall-clock duration
        test_s2s: Test-split S2S, when a test split exists
        test_s2t: Test-split S2T, when a test split exists
    """

    s2s: float
    s2t: float
    baseline_s2s: float
    baseline_s2t: float
    epochs: tuple[EpochRecord, ...] = field(default_factory=tuple)
    best_epoch: int = 0
    seconds: float = 0.0
    test_s2s: float | None = None
    test_s2t: float | None = None

    @property
    def losses(self) -> list[float]:
        """Training loss curve."""
        return [record.train_loss for record in self.epochs]


def batch_errors(model: AtomModel, batch: WindowBatch) -> tuple[float, float]:
    """Summed (not averaged) S2S and S2T of a batch."""
    pred = model.predict(batch.positions, batch.velocities, batch.atomic_numbers, batch.lags)
    errors = frame_errors(pred, batch.targets)
    return float(errors[:, -1].sum()), float(errors.mean(axis=1).sum())


def evaluate(model: AtomModel, dataset: WindowDataset, batch_size: int = 64) -> tuple[float, float]:
    """
    Mean S2S and S2T of ``model`` over every window of ``dataset``.

    Evaluation never adds noise and records no graph.
    """
    s2s = s2t = 0.0
    for batch in make_batches(dataset, batch_size):
        part_s2s, part_s2t = batch_errors(model, batch)
        s2s += part_s2s
        s2t += part_s2t
    return s2s / len(dataset), s2t / len(dataset)


def static_baseline(dataset: WindowDataset) -> tuple[float, float]:
    """S2S and S2T of predicting the input positions at every lag."""
    errors = frame_errors(dataset.positions, dataset.targets)
    return float(errors[:, -1].mean()), float(errors.mean())


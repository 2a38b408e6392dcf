"""
Single-task and multitask training loops.

Both loops minimise the batch-mean S2T of label-noised windows with
AdamW-AMSGrad and keep the parameters of the epoch with the lowest mean
validation S2S. Ties keep the earliest epoch.

Listeners on the optional :class:`~atomkit.core.events.EventEmitter` receive
``"epoch_end"`` with an :class:`EpochRecord` and ``"best_checkpoint"`` with a
:class:`ParameterSnapshot`.
"""

from __future__ import annotations

import logging
import math
import time
from collections.abc import Callable, Iterable, Iterator, Sequence
from dataclasses import dataclass

import numpy as np
from tqdm import tqdm

from ..autodiff.optim import AdamWAMSGrad
from ..autodiff.tensor import Array
from ..core.errors import ConfigurationError, DatasetError, NumericalDivergence
from ..core.events import EventEmitter
from ..data.loader import (
    WindowBatch,
    WindowDataset,
    frame_offsets,
    gather_batch,
    make_batches,
    prefetch,
    split_starts,
    split_windows,
)
from ..data.trajectory import Trajectory
from ..geometry.state import IntArray
from ..model.network import AtomModel
from .config import TrainRunConfig
from .discretization import discretize
from .metrics import EpochRecord, MetricsReport, evaluate, s2t_loss, static_baseline
from .sampling import noise_batch, sample_loguniform

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class ParameterSnapshot:
    """Parameter values of one epoch together with its validation S2S."""

    epoch: int
    val_s2s: float
    params: dict[str, Array]


class EarlyStopping:
    """
    Keeps the snapshot with the lowest validation S2S seen so far.

    Examples:
        >>> from atomkit.model import AtomModelConfig
        >>> model = AtomModel.initialize(AtomModelConfig(), np.random.default_rng(0))
        >>> stopper = EarlyStopping(model)
        >>> stopper.update(1, 2.0), stopper.update(2, 2.0), stopper.update(3, 1.0)
        (True, False, True)
        >>> stopper.best.epoch
        3
    """

    def __init__(self, model: AtomModel) -> None:
        """Track ``model``; nothing is recorded yet."""
        self._model = model
        self.best: ParameterSnapshot | None = None

    def update(self, epoch: int, val_s2s: float) -> bool:
        """Record the current parameters if ``val_s2s`` is a strict improvement."""
        if self.best is not None and not val_s2s < self.best.val_s2s:
            return False
        self.best = ParameterSnapshot(epoch, val_s2s, self._model.state_dict())
        return True

    def restore(self) -> int:
        """
        Load the best snapshot back into the model.

        Returns:
            Its epoch, or 0 when no epoch was recorded
        """
        if self.best is None:
            return 0
        self._model.load_state_dict(self.best.params)
        return self.best.epoch


def make_optimizer(model: AtomModel, config: TrainRunConfig) -> AdamWAMSGrad:
    """Optimizer over every parameter of ``model``."""
    return AdamWAMSGrad(
        model.parameters(),
        lr=config.lr,
        betas=config.betas,
        weight_decay=config.weight_decay,
        eps=config.eps,
        max_grad_norm=config.max_grad_norm,
    )


def train_step(
    model: AtomModel,
    optimizer: AdamWAMSGrad,
    batch: WindowBatch,
    config: TrainRunConfig,
    rng: np.random.Generator,
) -> float:
    """
    One noised forward/backward/update.

    Returns:
        The batch loss before the update

    Raises:
        NumericalDivergence: If the loss is NaN or infinite
    """
    noisy = noise_batch(batch, config.label_noise, rng)
    optimizer.zero_grad()
    pred = model.forward(
        noisy.positions,
        noisy.velocities,
        noisy.atomic_numbers,
        noisy.lags,
        training=True,
        rng=rng,
    )
    loss = s2t_loss(pred, noisy.targets)
    value = loss.item()
    if not math.isfinite(value):
        raise NumericalDivergence(
            f"loss became {value} on {batch.name} windows starting at {batch.starts[:4].tolist()}"
        )
    loss.backward()
    optimizer.step()
    return value


def log_epoch_record(record: EpochRecord) -> None:
    """``epoch_end`` listener writing one INFO line."""
    logger.info(
        "epoch %d: train %.6g, val S2S %.6g, val S2T %.6g",
        record.epoch,
        record.train_loss,
        record.val_s2s,
        record.val_s2t,
    )


def _fit(
    model: AtomModel,
    config: TrainRunConfig,
    epoch_batches: Callable[[], Iterable[WindowBatch]],
    validate: Callable[[], tuple[float, float]],
    rng: np.random.Generator,
    events: EventEmitter,
    label: str,
) -> tuple[list[EpochRecord], int]:
    optimizer = make_optimizer(model, config)
    stopper = EarlyStopping(model)
    records: list[EpochRecord] = []
    bar = tqdm(
        range(1, config.epochs + 1),
        desc=label,
        unit="epoch",
        disable=not config.show_progress,
    )
    for epoch in bar:
        batches = epoch_batches()
        if config.prefetch:
            batches = prefetch(batches)
        losses = [train_step(model, optimizer, batch, config, rng) for batch in batches]
        val_s2s, val_s2t = validate()
        record = EpochRecord(epoch, float(np.mean(losses)), val_s2s, val_s2t)
        records.append(record)
        bar.set_postfix(loss=f"{record.train_loss:.4g}", val_s2s=f"{val_s2s:.4g}")
        events.emit("epoch_end", record)
        if stopper.update(epoch, val_s2s):
            events.emit("best_checkpoint", stopper.best)
    best_epoch = stopper.restore()
    if best_epoch:
        logger.debug("%s: kept epoch %d of %d", label, best_epoch, config.epochs)
    return records, best_epoch


def train_single_task(
    traj: Trajectory,
    model: AtomModel,
    config: TrainRunConfig,
    *,
    rng: np.random.Generator | None = None,
    events: EventEmitter | None = None,
) -> tuple[AtomModel, MetricsReport]:
    """
    Fit ``model`` to one trajectory at the fixed discretized lags.

    Windows are split contiguously into train, validation and (optionally)
    test ranges. The returned model holds the best-validation parameters.

    Args:
        traj: Training trajectory
        model: Operator to train in place
        config: Run hyperparameters
        rng: Generator for shuffling, noise and dropout (default: seeded from config)
        events: Emitter receiving ``epoch_end`` and ``best_checkpoint``

    Returns:
        The model and its validation report

    Raises:
        DatasetError: If the trajectory has no room for the requested windows
        NumericalDivergence: If a loss becomes non-finite
    """
    rng = rng if rng is not None else np.random.default_rng(config.seed)
    events = events if events is not None else EventEmitter()
    plan = discretize(config.discretization, 0.0, config.horizon, config.n_steps, config.tail_lag)
    train, val, test = split_windows(
        traj, plan.lags, config.n_train, config.n_val, config.n_test, config.stride, rng=rng
    )
    logger.info(
        "%s: %d train / %d val / %d test windows, P=%d, horizon %g",
        traj.name,
        len(train),
        len(val),
        len(test) if test is not None else 0,
        config.n_steps,
        config.horizon,
    )
    start = time.perf_counter()
    records, best_epoch = _fit(
        model,
        config,
        lambda: make_batches(train, config.batch_size, rng),
        lambda: evaluate(model, val),
        rng,
        events,
        traj.name,
    )
    return model, _report(model, val, test, records, best_epoch, time.perf_counter() - start)


def _report(
    model: AtomModel,
    val: WindowDataset,
    test: WindowDataset | None,
    records: Sequence[EpochRecord],
    best_epoch: int,
    seconds: float,
) -> MetricsReport:
    s2s, s2t = evaluate(model, val)
    baseline_s2s, baseline_s2t = static_baseline(val)
    test_s2s, test_s2t = evaluate(model, test) if test is not None else (None, None)
    return MetricsReport(
        s2s=s2s,
        s2t=s2t,
        baseline_s2s=baseline_s2s,
        baseline_s2t=baseline_s2t,
        epochs=tuple(records),
        best_epoch=best_epoch,
        seconds=seconds,
        test_s2s=test_s2s,
        test_s2t=test_s2t,
    )


def multitask_schedule(
    starts: Sequence[IntArray], batch_size: int, rng: np.random.Generator
) -> list[tuple[int, IntArray]]:
    """
    Batches of one epoch as ``(molecule index, window starts)``.

    Each molecule's starts are shuffled and chunked, the chunks are taken
    round-robin across molecules and the resulting order is shuffled. A batch
    never mixes molecules because their atom counts may differ.

    Examples:
        >>> plan = multitask_schedule([np.arange(4), np.arange(2)], 2, np.random.default_rng(0))
        >>> sorted(m for m, _ in plan)
        [0, 0, 1]
    """
    chunks = []
    for molecule, index in enumerate(starts):
        order = rng.permutation(np.asarray(index))
        chunks.append(
            [np.sort(order[lo : lo + batch_size]) for lo in range(0, order.size, batch_size)]
        )
    schedule = [
        (molecule, per_molecule[k])
        for k in range(max((len(c) for c in chunks), default=0))
        for molecule, per_molecule in enumerate(chunks)
        if k < len(per_molecule)
    ]
    return [schedule[i] for i in rng.permutation(len(schedule))]


def _check_multitask(trajectories: Sequence[Trajectory], model: AtomModel, config: TrainRunConfig) -> float:
    names = [traj.name for traj in trajectories]
    if len(set(names)) != len(names):
        raise DatasetError(f"molecule names must be unique, got {names}")
    dts = {traj.dt for traj in trajectories}
    if len(dts) != 1:
        raise DatasetError(
            "molecules disagree on the frame spacing: "
            + ", ".join(f"{t.name} dt={t.dt}" for t in trajectories)
        )
    if not model.config.rwpe_enabled:
        raise ConfigurationError("multitask training needs rwpe_enabled=True")
    dt = dts.pop()
    floor = config.n_steps * dt
    dt_min = config.dt_min if config.dt_min is not None else floor
    if dt_min < floor * (1.0 - 1e-9):
        raise ConfigurationError(
            f"dt_min={dt_min} is below P * dt = {floor}; lags would share frames"
        )
    return min(dt_min, config.horizon)


def train_multitask(
    trajectories: Sequence[Trajectory],
    model: AtomModel,
    config: TrainRunConfig,
    *,
    rng: np.random.Generator | None = None,
    events: EventEmitter | None = None,
) -> tuple[AtomModel, dict[str, MetricsReport]]:
    """
    Fit one operator to several molecules with a random horizon per batch.

    Every batch draws its horizon log-uniformly from ``[dt_min, horizon]``
    and queries the uniform discretization of it; the lags reach the model
    only through the temporal rotary embedding. Validation always uses the
    full horizon, and early stopping tracks the S2S averaged over molecules.
    With a single molecule this falls back to :func:`train_single_task`.

    Returns:
        The model and one validation report per molecule name

    Raises:
        DatasetError: For no molecules, duplicate names or mismatched frame spacing
        ConfigurationError: Without random-walk encodings or with dt_min < P * dt
    """
    if not trajectories:
        raise DatasetError("multitask training needs at least one molecule")
    if len(trajectories) == 1:
        logger.warning("only one molecule supplied; training single-task")
        traj = trajectories[0]
        model, report = train_single_task(traj, model, config, rng=rng, events=events)
        return model, {traj.name: report}

    dt_min = _check_multitask(trajectories, model, config)
    rng = rng if rng is not None else np.random.default_rng(config.seed)
    events = events if events is not None else EventEmitter()
    dt = trajectories[0].dt
    val_lags = discretize("uniform", 0.0, config.horizon, config.n_steps).lags
    max_offset = int(frame_offsets(val_lags, dt)[-1])

    train_starts: list[IntArray] = []
    validation: list[WindowDataset] = []
    tests: list[WindowDataset | None] = []
    for traj in trajectories:
        try:
            train, val, test = split_starts(
                len(traj), max_offset, config.n_train, config.n_val, config.n_test, config.stride
            )
        except DatasetError as exc:
            raise DatasetError(f"{traj.name}: {exc}") from exc
        train_starts.append(train)
        validation.append(WindowDataset(traj, val_lags, val))
        tests.append(WindowDataset(traj, val_lags, test) if test.size else None)
    logger.info(
        "multitask over %d molecules, %d train windows, horizon ~ LogUnif(%g, %g)",
        len(trajectories),
        sum(s.size for s in train_starts),
        dt_min,
        config.horizon,
    )

    def epoch_batches() -> Iterator[WindowBatch]:
        # Every draw happens here so a prefetching thread sees a fixed plan.
        plan = [
            (
                molecule,
                starts,
                discretize(
                    "uniform", 0.0, sample_loguniform(dt_min, config.horizon, rng), config.n_steps
                ).lags,
            )
            for molecule, starts in multitask_schedule(train_starts, config.batch_size, rng)
        ]
        return (gather_batch(trajectories[m], starts, lags) for m, starts, lags in plan)

    def validate() -> tuple[float, float]:
        scores = np.array([evaluate(model, val) for val in validation])
        s2s, s2t = scores.mean(axis=0)
        return float(s2s), float(s2t)

    start = time.perf_counter()
    records, best_epoch = _fit(model, config, epoch_batches, validate, rng, events, "multitask")
    seconds = time.perf_counter() - start
    reports = {
        traj.name: _report(model, val, test, records, best_epoch, seconds)
        for traj, val, test in zip(trajectories, validation, tests, strict=True)
    }
    return model, reports


def evaluation_windows(
    traj: Trajectory, config: TrainRunConfig, *, stride: int | None = None
) -> WindowDataset:
    """
    Every ``stride``-th window (default from ``config``) at the configured lags.

    Raises:
        DatasetError: If the trajectory is shorter than the horizon
    """
    plan = discretize(config.discretization, 0.0, config.horizon, config.n_steps, config.tail_lag)
    offsets = frame_offsets(plan.lags, traj.dt)
    starts = np.arange(0, max(len(traj) - int(offsets[-1]), 0), stride or config.stride)
    return WindowDataset(traj, plan.lags, starts)


def evaluate_zero_shot(
    model: AtomModel,
    traj: Trajectory,
    config: TrainRunConfig,
    *,
    stride: int | None = None,
) -> MetricsReport:
    """
    Score a trained model on a molecule it has never seen.

    Every window (every ``stride``-th, default from ``config``) at the full
    horizon is evaluated, next to the static baseline.
    """
    start = time.perf_counter()
    dataset = evaluation_windows(traj, config, stride=stride)
    s2s, s2t = evaluate(model, dataset)
    baseline_s2s, baseline_s2t = static_baseline(dataset)
    return MetricsReport(
        s2s=s2s,
        s2t=s2t,
        baseline_s2s=baseline_s2s,
        baseline_s2t=baseline_s2t,
        seconds=time.perf_counter() - start,
    )

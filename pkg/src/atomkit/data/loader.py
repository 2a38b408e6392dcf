"""
Frame-duplicating window datasets.

Every input frame is copied P times once, when the dataset is built, and
the targets are gathered at the query lags at the same moment. Epochs then
only take views of prepared arrays: shuffling permutes whole batch blocks,
and window order inside the blocks can be randomised once at build time.
"""

from __future__ import annotations

import logging
import queue
import threading
from collections.abc import Iterable, Iterator
from dataclasses import dataclass
from typing import TYPE_CHECKING, cast

import numpy as np
from numpy.typing import ArrayLike

from ..core.errors import ContractError, DatasetError
from ..geometry.state import FloatArray, IntArray
from .trajectory import Trajectory

if TYPE_CHECKING:
    from ..training.discretization import DiscretizationPlan

logger = logging.getLogger(__name__)


def frame_offsets(lags: ArrayLike, dt: float) -> IntArray:
    """
    Nearest frame offset for each lag.

    Raises:
        ContractError: If a lag rounds to zero frames or offsets are not increasing

    Examples:
        >>> frame_offsets([375.0, 750.0, 3000.0], 1.0).tolist()
        [375, 750, 3000]
    """
    offsets = np.rint(np.asarray(lags, dtype=np.float64) / dt).astype(np.int64).reshape(-1)
    if offsets.size == 0 or offsets[0] < 1:
        raise ContractError(f"lags {np.asarray(lags).tolist()} must be at least half a frame (dt={dt})")
    if np.any(np.diff(offsets) <= 0):
        raise ContractError(f"lags collapse onto the same frame at dt={dt}: {offsets.tolist()}")
    return offsets


@dataclass(frozen=True, eq=False)
class WindowBatch:
    """
    One mini-batch.

    Attributes:
        positions: ``(B, P, N, 3)`` duplicated input positions
        velocities: ``(B, P, N, 3)`` duplicated input velocities
        targets: ``(B, P, N, 3)`` positions at the query lags
        lags: ``(P,)`` query lags
        atomic_numbers: ``(N,)``
        starts: ``(B,)`` input frame indices
        name: Source trajectory
    """

    positions: FloatArray
    velocities: FloatArray
    targets: FloatArray
    lags: FloatArray
    atomic_numbers: IntArray
    starts: IntArray
    name: str

    def __len__(self) -> int:
        return int(self.positions.shape[0])


class WindowDataset:
    """
    Windows (input frame, P target frames) of one trajectory.

    Examples:
        >>> x = np.arange(6.0)[:, None, None] * np.ones((1, 1, 3))
        >>> traj = Trajectory.from_arrays(x, np.zeros_like(x), [6], dt=1.0)
        >>> ds = WindowDataset(traj, [1.0, 2.0])
        >>> len(ds), ds.targets[0, :, 0, 0].tolist()
        (4, [1.0, 2.0])
    """

    def __init__(self, traj: Trajectory, lags: ArrayLike, starts: ArrayLike | None = None) -> None:
        """
        Duplicate inputs and gather targets.

        Args:
            traj: Source trajectory
            lags: Query lags; rounded to the nearest frame
            starts: Input frame indices (default: every frame that has all targets)

        Raises:
            DatasetError: If no window fits in the trajectory
        """
        offsets = frame_offsets(lags, traj.dt)
        last_start = len(traj) - 1 - int(offsets[-1])
        if starts is None:
            index = np.arange(max(last_start + 1, 0), dtype=np.int64)
        else:
            index = np.asarray(starts, dtype=np.int64).reshape(-1)
            if index.size and (index.min() < 0 or index.max() > last_start):
                raise DatasetError(
                    f"window starts must lie in [0, {last_start}] for {traj.name}, got "
                    f"[{index.min()}, {index.max()}]"
                )
        if index.size == 0:
            raise DatasetError(
                f"{traj.name} has {len(traj)} frames, too short for a lag of {offsets[-1]} frames"
            )
        n_steps = offsets.size
        shape = (index.size, n_steps, traj.n_atoms, 3)
        self.name = traj.name
        self.dt = traj.dt
        self.atomic_numbers = traj.atomic_numbers
        self.offsets = offsets
        self.lags = offsets * traj.dt
        self.starts = index
        self.positions = np.ascontiguousarray(np.broadcast_to(traj.positions[index][:, None], shape))
        self.velocities = np.ascontiguousarray(np.broadcast_to(traj.velocities[index][:, None], shape))
        self.targets = traj.positions[index[:, None] + offsets[None, :]]
        logger.debug("%s: %d windows of %d steps", self.name, index.size, n_steps)

    @classmethod
    def from_plan(
        cls, traj: Trajectory, plan: DiscretizationPlan, starts: ArrayLike | None = None
    ) -> WindowDataset:
        """Windows at the lags of a discretization plan."""
        return cls(traj, plan.lags, starts)

    def __len__(self) -> int:
        return int(self.starts.size)

    @property
    def n_steps(self) -> int:
        """Query timesteps P."""
        return int(self.offsets.size)

    @property
    def n_atoms(self) -> int:
        """Atoms per frame."""
        return int(self.atomic_numbers.size)

    @property
    def nbytes(self) -> int:
        """Bytes held by the prepared arrays."""
        return self.positions.nbytes + self.velocities.nbytes + self.targets.nbytes

    def take(self, index: slice | IntArray) -> WindowBatch:
        """Batch of the selected windows (a view for slices)."""
        return WindowBatch(
            self.positions[index],
            self.velocities[index],
            self.targets[index],
            self.lags,
            self.atomic_numbers,
            self.starts[index],
            self.name,
        )


def make_batches(
    dataset: WindowDataset,
    batch_size: int,
    rng: np.random.Generator | None = None,
) -> Iterator[WindowBatch]:
    """
    Iterate over a dataset in mini-batches.

    Every batch is a contiguous view of the prepared arrays, so an epoch
    allocates no window data. Without a generator batches come in window
    order; with one the order of the batch blocks is permuted (drawn
    immediately, so a prefetching consumer sees the same order). Build the
    dataset with shuffled ``starts`` to mix windows across blocks. The last
    block may be short.

    Raises:
        ContractError: If ``batch_size`` < 1
    """
    if batch_size < 1:
        raise ContractError(f"batch size must be >= 1, got {batch_size}")
    lows = range(0, len(dataset), batch_size)
    order = lows if rng is None else [lows[i] for i in rng.permutation(len(lows))]
    return (dataset.take(slice(lo, lo + batch_size)) for lo in order)


def gather_batch(traj: Trajectory, starts: ArrayLike, lags: ArrayLike) -> WindowBatch:
    """
    Build one batch directly from a trajectory for lags chosen per batch.

    Used when the lags change from batch to batch, so nothing can be
    prepared ahead of time.

    Raises:
        DatasetError: If a window runs past the end of the trajectory
    """
    offsets = frame_offsets(lags, traj.dt)
    index = np.asarray(starts, dtype=np.int64).reshape(-1)
    if index.size == 0 or index.min() < 0 or index.max() + offsets[-1] >= len(traj):
        raise DatasetError(f"windows at {index.tolist()} + {offsets[-1]} frames exceed {traj.name}")
    shape = (index.size, offsets.size, traj.n_atoms, 3)
    return WindowBatch(
        np.broadcast_to(traj.positions[index][:, None], shape),
        np.broadcast_to(traj.velocities[index][:, None], shape),
        traj.positions[index[:, None] + offsets[None, :]],
        offsets * traj.dt,
        traj.atomic_numbers,
        index,
        traj.name,
    )


def split_starts(
    n_frames: int,
    max_offset: int,
    n_train: int | None = None,
    n_val: int | None = None,
    n_test: int = 0,
    stride: int = 1,
) -> tuple[IntArray, IntArray, IntArray]:
    """
    Contiguous train / validation / test input frame indices.

    Windows start every ``stride`` frames and must leave room for
    ``max_offset`` frames after the input. Missing counts default to 10% of
    the windows for validation and the rest for training.

    Raises:
        DatasetError: If the requested counts exceed the available windows

    Examples:
        >>> [s.tolist() for s in split_starts(8, 2, n_train=3, n_val=2, n_test=1)]
        [[0, 1, 2], [3, 4], [5]]
    """
    if stride < 1:
        raise ContractError(f"stride must be >= 1, got {stride}")
    available = np.arange(0, max(n_frames - max_offset, 0), stride, dtype=np.int64)
    total = available.size
    if n_val is None:
        n_val = max(1, total // 10)
    if n_train is None:
        n_train = total - n_val - n_test
    if n_train < 1 or n_val < 1 or n_test < 0 or n_train + n_val + n_test > total:
        raise DatasetError(
            f"cannot split {total} windows into train={n_train}, val={n_val}, test={n_test}"
        )
    return (
        available[:n_train],
        available[n_train : n_train + n_val],
        available[n_train + n_val : n_train + n_val + n_test],
    )


def split_windows(
    traj: Trajectory,
    lags: ArrayLike,
    n_train: int | None = None,
    n_val: int | None = None,
    n_test: int = 0,
    stride: int = 1,
    *,
    rng: np.random.Generator | None = None,
) -> tuple[WindowDataset, WindowDataset, WindowDataset | None]:
    """
    Window datasets over the contiguous split of :func:`split_starts`.

    With ``rng`` the training windows are stored in a random order, so
    contiguous batches mix windows from the whole training range. The test
    dataset is None when ``n_test`` is 0.
    """
    offsets = frame_offsets(lags, traj.dt)
    try:
        train, val, test = split_starts(len(traj), int(offsets[-1]), n_train, n_val, n_test, stride)
    except DatasetError as exc:
        raise DatasetError(f"{traj.name}: {exc}") from exc
    return (
        WindowDataset(traj, lags, train if rng is None else rng.permutation(train)),
        WindowDataset(traj, lags, val),
        WindowDataset(traj, lags, test) if test.size else None,
    )


_DONE = object()


def prefetch[T](batches: Iterable[T], depth: int = 2) -> Iterator[T]:
    """
    Produce ``batches`` on a background thread through a bounded queue.

    Order is preserved; an exception in the producer is re-raised in the
    consumer.
    """
    if depth < 1:
        raise ContractError(f"prefetch depth must be >= 1, got {depth}")
    buffer: queue.Queue[object] = queue.Queue(maxsize=depth)
    stop = threading.Event()

    def produce() -> None:
        try:
            for item in batches:
                if stop.is_set():
                    return
                buffer.put(item)
        except BaseException as exc:  # re-raised on the consumer side
            buffer.put(exc)
            return
        buffer.put(_DONE)

    worker = threading.Thread(target=produce, name="atomkit-prefetch", daemon=True)
    worker.start()
    try:
        while True:
            item = buffer.get()
            if item is _DONE:
                return
            if isinstance(item, BaseException):
                raise item
            yield cast(T, item)
    finally:
        stop.set()
        while worker.is_alive():
            try:
                buffer.get_nowait()
            except queue.Empty:
                worker.join(timeout=0.01)

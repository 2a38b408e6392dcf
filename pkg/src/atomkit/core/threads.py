"""Worker-thread budget and an order-preserving parallel map."""

from __future__ import annotations

import os
from collections.abc import Callable, Iterable
from concurrent.futures import ThreadPoolExecutor

from .errors import ConfigurationError

THREADS_ENV = "ATOMKIT_THREADS"


def worker_count(requested: int | None = None) -> int:
    """
    Number of worker threads to use.

    ``ATOMKIT_THREADS`` caps the value; without it the CPU count is the cap.

    Args:
        requested: Desired worker count, or None for "as many as allowed"

    Returns:
        A positive thread count

    Raises:
        ConfigurationError: If the environment variable is not a positive integer
    """
    cap = os.cpu_count() or 1
    raw = os.environ.get(THREADS_ENV)
    if raw is not None:
        try:
            cap = int(raw)
        except ValueError:
            raise ConfigurationError(f"{THREADS_ENV} must be an integer, got {raw!r}") from None
        if cap < 1:
            raise ConfigurationError(f"{THREADS_ENV} must be >= 1, got {cap}")
    if requested is None:
        return cap
    return max(1, min(requested, cap))


def ordered_map[T, R](func: Callable[[T], R], items: Iterable[T], workers: int | None = None) -> list[R]:
    """
    Apply ``func`` to every item, possibly on a thread pool.

    Results come back in input order whatever the scheduling, so reductions
    over them behave exactly like a sequential loop.

    Examples:
        >>> ordered_map(lambda x: x * x, [1, 2, 3], workers=2)
        [1, 4, 9]
    """
    items = list(items)
    n_workers = worker_count(workers)
    if n_workers == 1 or len(items) < 2:
        return [func(item) for item in items]
    with ThreadPoolExecutor(max_workers=n_workers) as executor:
        return list(executor.map(func, items))

"""Timed, logged execution of pipeline stages."""

from __future__ import annotations

import logging
import time
from collections.abc import Callable, Iterator
from contextlib import contextmanager

logger = logging.getLogger(__name__)


@contextmanager
def stage_context(name: str) -> Iterator[None]:
    """
    Context manager that logs the start, end and duration of a stage.

    Args:
        name: The name of the stage being run

    Examples:
        >>> with stage_context("generate toy data"):
        ...     pass
    """
    separator = "=" * 10
    logger.info("%s %s %s", separator, name, separator)
    start = time.perf_counter()
    try:
        yield
    finally:
        logger.info("%s END %s (%.2fs) %s", separator, name, time.perf_counter() - start, separator)


def run_stage[R](func: Callable[[], R], name: str | None = None) -> R:
    """
    Execute a stage function inside :func:`stage_context`.

    Args:
        func: Zero-argument callable doing the work
        name: Optional name for the stage (defaults to function name)

    Returns:
        The return value of ``func``

    Examples:
        >>> run_stage(lambda: 42, "answer")
        42
    """
    stage_name = name or getattr(func, "__name__", "stage")
    with stage_context(stage_name):
        return func()

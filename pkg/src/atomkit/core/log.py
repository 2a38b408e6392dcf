"""Logging setup for command-line use. Library modules only create loggers."""

from __future__ import annotations

import logging

PACKAGE_LOGGER = "atomkit"
DEFAULT_FORMAT = "%(asctime)s %(levelname)-7s %(name)s: %(message)s"

_HANDLER_FLAG = "_atomkit_handler"


def configure_logging(level: int | str = logging.INFO, *, fmt: str = DEFAULT_FORMAT) -> logging.Logger:
    """
    Attach one stderr handler to the package logger.

    Calling it again only updates the level and format.

    Args:
        level: Logging level name or number
        fmt: Format string for the handler

    Returns:
        The configured ``atomkit`` logger
    """
    logger = logging.getLogger(PACKAGE_LOGGER)
    if isinstance(level, str):
        level = logging.getLevelNamesMapping().get(level.upper(), logging.INFO)
    logger.setLevel(level)

    handler = next((h for h in logger.handlers if getattr(h, _HANDLER_FLAG, False)), None)
    if handler is None:
        handler = logging.StreamHandler()
        setattr(handler, _HANDLER_FLAG, True)
        logger.addHandler(handler)
    handler.setFormatter(logging.Formatter(fmt))
    logger.propagate = False
    return logger

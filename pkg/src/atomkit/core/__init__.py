"""Ambient utilities: errors, logging, configuration, events and threading."""

from __future__ import annotations

from .config import from_mapping, load_json_config, to_mapping
from .errors import (
    AtomkitError,
    CanonicalizationDegenerate,
    CheckpointError,
    ConfigurationError,
    ContractError,
    DatasetError,
    NumericalDivergence,
    ShapeError,
    SmilesParseError,
    TrajectoryParseError,
)
from .events import EventEmitter
from .log import configure_logging
from .runner import run_stage, stage_context
from .threads import ordered_map, worker_count

__all__ = [
    "AtomkitError",
    "CanonicalizationDegenerate",
    "CheckpointError",
    "ConfigurationError",
    "ContractError",
    "DatasetError",
    "EventEmitter",
    "NumericalDivergence",
    "ShapeError",
    "SmilesParseError",
    "TrajectoryParseError",
    "configure_logging",
    "from_mapping",
    "load_json_config",
    "ordered_map",
    "run_stage",
    "stage_context",
    "to_mapping",
    "worker_count",
]

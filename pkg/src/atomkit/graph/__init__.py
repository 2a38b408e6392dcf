"""Radius graphs and random-walk positional encodings."""

from __future__ import annotations

from .radius import DEFAULT_EPSILON, RadiusGraph, radius_graph
from .rwpe import DEFAULT_WALK_LENGTH, RwpeMatrix, attach_rwpe, rwpe, transition_matrix

__all__ = [
    "DEFAULT_EPSILON",
    "DEFAULT_WALK_LENGTH",
    "RadiusGraph",
    "RwpeMatrix",
    "attach_rwpe",
    "radius_graph",
    "rwpe",
    "transition_matrix",
]

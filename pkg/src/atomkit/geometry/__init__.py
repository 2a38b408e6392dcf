"""Molecular states, rotations, equivariant lifting and canonical frames."""

from __future__ import annotations

from .canonical import CanonicalFrame, canonicalize, decanonicalize
from .lifting import (
    ATOMIC_EMBED_DIM,
    ChannelLayout,
    EquivariantLift,
    Lift,
    LiftedEmbedding,
    LinearLift,
    augment_with_norm,
    duplicate_state,
    equivariant_lift,
)
from .rotations import quaternion_to_matrix, random_rotation
from .state import FloatArray, IntArray, MoleculeState

__all__ = [
    "ATOMIC_EMBED_DIM",
    "CanonicalFrame",
    "ChannelLayout",
    "EquivariantLift",
    "FloatArray",
    "IntArray",
    "Lift",
    "LiftedEmbedding",
    "LinearLift",
    "MoleculeState",
    "augment_with_norm",
    "canonicalize",
    "decanonicalize",
    "duplicate_state",
    "equivariant_lift",
    "quaternion_to_matrix",
    "random_rotation",
]

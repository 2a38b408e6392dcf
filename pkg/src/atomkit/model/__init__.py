"""The trajectory operator: configuration, temporal rotary embedding, attention, network."""

from __future__ import annotations

from .attention import (
    AttentionResult,
    heterogeneous_attention,
    merge_heads,
    split_heads,
    value_residual_mix,
)
from .config import (
    AtomModelConfig,
    load_config_sidecar,
    save_config_sidecar,
    sidecar_path,
)
from .network import AtomModel, atom_forward, canonical_frame_or_identity
from .trope import TropeAngles, apply_trope, trope_angles, trope_frequencies

__all__ = [
    "AtomModel",
    "AtomModelConfig",
    "AttentionResult",
    "TropeAngles",
    "apply_trope",
    "atom_forward",
    "canonical_frame_or_identity",
    "heterogeneous_attention",
    "load_config_sidecar",
    "merge_heads",
    "save_config_sidecar",
    "sidecar_path",
    "split_heads",
    "trope_angles",
    "trope_frequencies",
    "value_residual_mix",
]

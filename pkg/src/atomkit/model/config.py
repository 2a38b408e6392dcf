"""Hyperparameters of the trajectory operator."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any

from ..core.config import from_mapping, to_mapping
from ..core.errors import CheckpointError, ConfigurationError
from ..geometry.lifting import ChannelLayout, Lift

MODES = ("quasi_equivariant", "canonicalized")


@dataclass(frozen=True)
class AtomModelConfig:
    """
    Architecture of the operator.

    Defaults are a desk-scale reduction of the reference setup (width 128,
    5 layers, 8 heads, RoPE base 1000): ratios are kept, sizes are not.

    Attributes:
        d_v: Embedding width, equal to ``n_heads * d_h``
        n_layers: Number of attention blocks
        n_heads: Attention heads
        d_h: Per-head width (even, rotary pairs)
        rope_base: Frequency base b of the temporal rotary embedding
        rope_timescale: Timescale tau dividing every angle
        attention_dropout: Dropout probability on attention weights
        mlp_hidden_multiple: Hidden width of the SwiGLU block in units of d_v
        delta_prediction: Predict displacements added to the input positions
        mode: ``"quasi_equivariant"`` or ``"canonicalized"``
        rwpe_enabled: Reserve channels of Z for random-walk encodings
        rwpe_k: Walk length K of the encodings
        rwpe_epsilon: Radius of the neighbourhood graph
        lifting: Registered lift name (``"equivariant"`` or ``"linear"``)
        use_trope: False replaces temporal rotations by identities
        heterogeneous: False attends over Z only (plain self-attention)
        n_output_heads: Accepted for compatibility; only 1 is implemented
        rms_eps: Epsilon of every RMS norm

    Examples:
        >>> AtomModelConfig(d_v=24, n_heads=3, d_h=8).layout().n_vectors
        4
    """

    d_v: int = 32
    n_layers: int = 2
    n_heads: int = 4
    d_h: int = 8
    rope_base: float = 1000.0
    rope_timescale: float = 1.0
    attention_dropout: float = 0.0
    mlp_hidden_multiple: int = 4
    delta_prediction: bool = True
    mode: str = "quasi_equivariant"
    rwpe_enabled: bool = False
    rwpe_k: int = 8
    rwpe_epsilon: float = 1.6
    lifting: str = "equivariant"
    use_trope: bool = True
    heterogeneous: bool = True
    n_output_heads: int = 1
    rms_eps: float = 1e-6

    def __post_init__(self) -> None:
        """Validate the architecture."""
        if self.d_h < 2 or self.d_h % 2:
            raise ConfigurationError(f"d_h must be even and >= 2, got {self.d_h}")
        if self.n_heads < 1 or self.n_layers < 1:
            raise ConfigurationError("n_heads and n_layers must be >= 1")
        if self.d_v != self.n_heads * self.d_h:
            raise ConfigurationError(
                f"d_v={self.d_v} must equal n_heads * d_h = {self.n_heads * self.d_h}"
            )
        if not 0.0 <= self.attention_dropout < 1.0:
            raise ConfigurationError(f"attention_dropout must be in [0, 1), got {self.attention_dropout}")
        if self.rope_base <= 0.0 or self.rope_timescale <= 0.0:
            raise ConfigurationError("rope_base and rope_timescale must be > 0")
        if self.mlp_hidden_multiple < 1:
            raise ConfigurationError("mlp_hidden_multiple must be >= 1")
        if self.mode not in MODES:
            raise ConfigurationError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.lifting not in Lift.available():
            raise ConfigurationError(f"lifting must be one of {Lift.available()}, got {self.lifting!r}")
        if self.rwpe_k < 1 or self.rwpe_epsilon <= 0.0:
            raise ConfigurationError("rwpe_k must be >= 1 and rwpe_epsilon > 0")
        if self.n_output_heads != 1:
            raise ConfigurationError("only a single output head is implemented")
        if self.rms_eps < 0.0:
            raise ConfigurationError(f"rms_eps must be >= 0, got {self.rms_eps}")
        self.layout()

    @property
    def reserved_channels(self) -> int:
        """Scalar channels of Z kept for random-walk encodings."""
        return self.rwpe_k if self.rwpe_enabled else 0

    @property
    def mlp_hidden(self) -> int:
        """Width of the gated hidden layer."""
        return self.mlp_hidden_multiple * self.d_v

    def layout(self) -> ChannelLayout:
        """Channel layout of the lifted streams."""
        return ChannelLayout.for_width(self.d_v, reserved=self.reserved_channels)

    @classmethod
    def from_dict(cls, mapping: dict[str, Any], **overrides: Any) -> AtomModelConfig:
        """Build from a JSON section; unknown keys are rejected."""
        return from_mapping(cls, mapping, **overrides)

    def to_dict(self) -> dict[str, Any]:
        """JSON-ready field values."""
        return to_mapping(self)


def sidecar_path(checkpoint: str | Path) -> Path:
    """Path of the JSON file stored next to a checkpoint."""
    path = Path(checkpoint)
    return path.with_name(path.name + ".json")


def save_config_sidecar(config: AtomModelConfig, checkpoint: str | Path) -> Path:
    """Write ``config`` next to ``checkpoint``; returns the sidecar path."""
    path = sidecar_path(checkpoint)
    path.write_text(json.dumps(config.to_dict(), indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return path


def load_config_sidecar(checkpoint: str | Path) -> AtomModelConfig:
    """
    Read the configuration stored next to ``checkpoint``.

    Raises:
        CheckpointError: If the sidecar is missing or not valid JSON
        ConfigurationError: If it holds an invalid configuration
    """
    path = sidecar_path(checkpoint)
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise CheckpointError(f"missing config sidecar {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise CheckpointError(f"config sidecar {path} is not valid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise CheckpointError(f"config sidecar {path} must hold a JSON object")
    return AtomModelConfig.from_dict(raw)

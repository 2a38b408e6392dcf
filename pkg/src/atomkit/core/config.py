"""
JSON-backed configuration for frozen dataclasses.

Config files are JSON objects whose sections (``"model"``, ``"train"``,
``"selection"``) use the dataclass field names verbatim.
"""

from __future__ import annotations

import dataclasses
import json
import types
import typing
from collections.abc import Mapping
from pathlib import Path
from typing import Any

from .errors import ConfigurationError

KNOWN_SECTIONS = frozenset({"model", "train", "selection"})


def _coerce(value: Any, annotation: Any) -> Any:
    """Turn JSON lists back into tuples where the field is typed as a tuple."""
    origin = typing.get_origin(annotation)
    if origin in (types.UnionType, typing.Union):
        for arg in typing.get_args(annotation):
            if arg is type(None):
                if value is None:
                    return None
                continue
            return _coerce(value, arg)
    if origin is tuple and isinstance(value, list):
        return tuple(value)
    if annotation is float and isinstance(value, int) and not isinstance(value, bool):
        return float(value)
    return value


def from_mapping[C](cls: type[C], mapping: Mapping[str, Any], **overrides: Any) -> C:
    """
    Build a config dataclass from a mapping.

    Args:
        cls: A dataclass type
        mapping: Field values, usually a JSON section
        **overrides: Values that win over ``mapping`` (None values are ignored)

    Returns:
        A validated instance of ``cls``

    Raises:
        ConfigurationError: On unknown keys or values rejected by the dataclass

    Examples:
        >>> from dataclasses import dataclass
        >>> @dataclass(frozen=True)
        ... class Demo:
        ...     width: int = 8
        >>> from_mapping(Demo, {"width": 4})
        Demo(width=4)
    """
    if not dataclasses.is_dataclass(cls):
        raise TypeError(f"{cls!r} is not a dataclass")
    fields = {f.name: f for f in dataclasses.fields(cls)}
    unknown = sorted(set(mapping) - set(fields))
    if unknown:
        raise ConfigurationError(f"unknown {cls.__name__} field(s): {', '.join(unknown)}")

    hints = typing.get_type_hints(cls)
    values = {**mapping, **{k: v for k, v in overrides.items() if v is not None}}
    kwargs = {name: _coerce(value, hints.get(name, Any)) for name, value in values.items()}
    try:
        return cls(**kwargs)
    except TypeError as exc:
        raise ConfigurationError(f"invalid {cls.__name__}: {exc}") from exc


def to_mapping(obj: Any) -> dict[str, Any]:
    """Dataclass instance to a JSON-ready dict (tuples become lists)."""
    if not dataclasses.is_dataclass(obj) or isinstance(obj, type):
        raise TypeError(f"{obj!r} is not a dataclass instance")
    return json.loads(json.dumps(dataclasses.asdict(obj)))


def load_json_config(path: str | Path) -> dict[str, dict[str, Any]]:
    """
    Read a sectioned JSON config file.

    Raises:
        ConfigurationError: If the file is unreadable, not JSON, or has unknown sections
    """
    try:
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise ConfigurationError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigurationError(f"config {path} is not valid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise ConfigurationError(f"config {path} must contain a JSON object")
    unknown = sorted(set(raw) - KNOWN_SECTIONS)
    if unknown:
        raise ConfigurationError(f"unknown config section(s): {', '.join(unknown)}")
    for name, section in raw.items():
        if not isinstance(section, dict):
            raise ConfigurationError(f"config section {name!r} must be an object")
    return raw

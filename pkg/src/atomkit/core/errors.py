"""
Exception hierarchy shared by every atomkit subpackage.

Input-validation errors also subclass ValueError so callers that only know
about the builtin keep working.
"""

from __future__ import annotations


class AtomkitError(Exception):
    """Base class for all atomkit errors."""


class ShapeError(AtomkitError, ValueError):
    """Array dimensions or row layout do not match."""


class ContractError(AtomkitError, ValueError):
    """A documented precondition was violated."""


class ConfigurationError(AtomkitError, ValueError):
    """Invalid configuration values or configuration file."""


class DatasetError(AtomkitError, ValueError):
    """Empty or mutually inconsistent datasets."""


class CanonicalizationDegenerate(AtomkitError):
    """The canonical frame is not uniquely defined for this state."""


class CheckpointError(AtomkitError, ValueError):
    """Unreadable checkpoint or parameters that do not fit the model."""


class NumericalDivergence(AtomkitError, ArithmeticError):
    """A loss or gradient became NaN or infinite."""


class TrajectoryParseError(AtomkitError, ValueError):
    """
    Malformed ATRJ trajectory file.

    Examples:
        >>> str(TrajectoryParseError("bad header", line=1))
        'line 1: bad header'
    """

    def __init__(self, message: str, *, line: int | None = None, offset: int | None = None) -> None:
        """Record where in the file parsing failed."""
        self.line = line
        self.offset = offset
        where = []
        if line is not None:
            where.append(f"line {line}")
        if offset is not None:
            where.append(f"byte offset {offset}")
        prefix = ", ".join(where)
        super().__init__(f"{prefix}: {message}" if prefix else message)


class SmilesParseError(AtomkitError, ValueError):
    """
    SMILES string outside the supported subset or chemically invalid.

    Examples:
        >>> str(SmilesParseError("unclosed branch", smiles="C(", position=1))
        "unclosed branch at position 1 in 'C('"
    """

    def __init__(self, message: str, *, smiles: str, position: int) -> None:
        """Record the offending string and character position."""
        self.smiles = smiles
        self.position = position
        super().__init__(f"{message} at position {position} in {smiles!r}")

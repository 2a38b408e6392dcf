"""
Similarity-window candidate selection.

A pool entry is accepted when it parses, its similarity to at least one
seed lies strictly inside ``(lower, upper)``, it passes the structural
criteria against the most similar such seed, and its similarity to every
molecule accepted before it is at most ``accepted_cap``.

Parsing, fingerprinting and the per-seed checks are independent per entry
and run on a thread pool; the accepted-similarity pass is sequential in
pool order, so the result equals a sequential run. With an accepted-count
target the pool is screened in chunks and the run stops at the target.
"""

from __future__ import annotations

import csv
import logging
from collections.abc import Callable, Iterable, Sequence
from dataclasses import dataclass, field
from functools import partial
from pathlib import Path
from typing import Any, ClassVar

from ..core.config import from_mapping, to_mapping
from ..core.errors import ConfigurationError, SmilesParseError
from ..core.threads import ordered_map
from .criteria import ALLOWED_ELEMENTS, MAX_NITROGEN, MAX_OXYGEN, check_criteria
from .fingerprint import DEFAULT_NBITS, DEFAULT_RADIUS, Fingerprint, morgan_fingerprint, tanimoto
from .smiles import MoleculeGraph, parse_smiles

logger = logging.getLogger(__name__)

Fingerprinter = Callable[[MoleculeGraph], Fingerprint]

SELECTION_HEADER = ("smiles", "name", "matched_seed", "seed_similarity")
REJECTION_HEADER = ("smiles", "name", "reason")
SCREEN_CHUNK = 256


@dataclass(frozen=True)
class SelectionConfig:
    """
    Thresholds of the selection protocol.

    ``accepted_cap`` has no default: the two published values conflict, so
    pick one through :meth:`preset` or set it explicitly. ``max_accepted``
    stops the screening once that many candidates are accepted.

    Examples:
        >>> SelectionConfig.preset("appendix").accepted_cap
        0.2
        >>> SelectionConfig(accepted_cap=0.8, lower=0.9, upper=0.9)
        Traceback (most recent call last):
        ...
        atomkit.core.errors.ConfigurationError: need 0 <= lower < upper <= 1, got (0.9, 0.9)
    """

    PRESETS: ClassVar[dict[str, float]] = {"main-text": 0.80, "appendix": 0.2}

    accepted_cap: float
    lower: float = 0.875
    upper: float = 0.925
    elements: tuple[str, ...] = ALLOWED_ELEMENTS
    max_oxygen: int = MAX_OXYGEN
    max_nitrogen: int = MAX_NITROGEN
    require_connected: bool = True
    radius: int = DEFAULT_RADIUS
    nbits: int = DEFAULT_NBITS
    max_accepted: int | None = None

    def __post_init__(self) -> None:
        """Validate thresholds."""
        if not 0.0 <= self.lower < self.upper <= 1.0:
            raise ConfigurationError(
                f"need 0 <= lower < upper <= 1, got ({self.lower}, {self.upper})"
            )
        if not 0.0 <= self.accepted_cap <= 1.0:
            raise ConfigurationError(f"accepted_cap must lie in [0, 1], got {self.accepted_cap}")
        if self.radius < 0 or self.nbits < 1:
            raise ConfigurationError(f"invalid fingerprint radius/width {self.radius}/{self.nbits}")
        if self.max_accepted is not None and self.max_accepted < 1:
            raise ConfigurationError(f"max_accepted must be >= 1, got {self.max_accepted}")

    @classmethod
    def preset(cls, name: str, **overrides: Any) -> SelectionConfig:
        """
        Named accepted-similarity cap plus optional overrides.

        Raises:
            ConfigurationError: For an unknown preset
        """
        if name not in cls.PRESETS:
            raise ConfigurationError(f"unknown preset {name!r}; choose from {sorted(cls.PRESETS)}")
        return cls(**{"accepted_cap": cls.PRESETS[name], **overrides})

    @classmethod
    def from_dict(cls, mapping: dict[str, Any], **overrides: Any) -> SelectionConfig:
        """Build from a JSON ``"selection"`` section; a ``"preset"`` key supplies the cap."""
        values = dict(mapping)
        preset = values.pop("preset", None)
        if preset is not None:
            if preset not in cls.PRESETS:
                raise ConfigurationError(
                    f"unknown preset {preset!r}; choose from {sorted(cls.PRESETS)}"
                )
            values.setdefault("accepted_cap", cls.PRESETS[preset])
        if "accepted_cap" not in values and overrides.get("accepted_cap") is None:
            raise ConfigurationError("selection needs accepted_cap or a preset")
        return from_mapping(cls, values, **overrides)

    def to_dict(self) -> dict[str, Any]:
        """JSON-ready mapping."""
        return to_mapping(self)

    def fingerprinter(self) -> Fingerprinter:
        """Morgan fingerprinting at this radius and width."""
        return partial(morgan_fingerprint, radius=self.radius, nbits=self.nbits)


@dataclass(frozen=True)
class PoolEntry:
    """One input line: a SMILES and an optional name."""

    smiles: str
    name: str = ""


@dataclass(frozen=True)
class Acceptance:
    """An accepted candidate and the seed that admitted it."""

    smiles: str
    name: str
    matched_seed: str
    seed_similarity: float

    def as_row(self) -> tuple[str, str, str, str]:
        """CSV cells."""
        return self.smiles, self.name, self.matched_seed, repr(self.seed_similarity)


@dataclass(frozen=True)
class Rejection:
    """A rejected pool entry and why."""

    smiles: str
    name: str
    reason: str


@dataclass
class SelectionResult:
    """
    Accepted and rejected entries, each in pool order.

    ``screened`` counts the pool entries examined; it falls short of the
    pool size when an accepted-count target stopped the run.
    """

    accepted: list[Acceptance] = field(default_factory=list)
    rejected: list[Rejection] = field(default_factory=list)
    screened: int = 0

    def target_reached(self, cfg: SelectionConfig) -> bool:
        """True once ``cfg.max_accepted`` candidates are accepted."""
        return cfg.max_accepted is not None and len(self.accepted) >= cfg.max_accepted


@dataclass(frozen=True)
class _Screened:
    entry: PoolEntry
    fingerprint: Fingerprint | None
    match: Acceptance | None
    reason: str


@dataclass(frozen=True)
class _Seed:
    name: str
    mol: MoleculeGraph
    fingerprint: Fingerprint


def _as_entry(item: str | PoolEntry) -> PoolEntry:
    return item if isinstance(item, PoolEntry) else PoolEntry(item)


def _screen(
    entry: PoolEntry, seeds: Sequence[_Seed], cfg: SelectionConfig, fingerprinter: Fingerprinter
) -> _Screened:
    try:
        mol = parse_smiles(entry.smiles)
    except SmilesParseError as exc:
        logger.warning("skipping unparseable pool entry %r: %s", entry.smiles, exc)
        return _Screened(entry, None, None, f"unparseable: {exc}")
    fp = fingerprinter(mol)
    scored = sorted(
        ((tanimoto(fp, seed.fingerprint), index) for index, seed in enumerate(seeds)),
        key=lambda pair: (-pair[0], pair[1]),
    )
    in_window = [(sim, i) for sim, i in scored if cfg.lower < sim < cfg.upper]
    if not in_window:
        best = scored[0][0] if scored else 0.0
        return _Screened(
            entry, fp, None, f"best seed similarity {best:.4f} outside ({cfg.lower}, {cfg.upper})"
        )
    similarity, index = in_window[0]
    verdict = check_criteria(
        mol,
        seeds[index].mol,
        elements=cfg.elements,
        max_oxygen=cfg.max_oxygen,
        max_nitrogen=cfg.max_nitrogen,
        require_connected=cfg.require_connected,
    )
    if not verdict:
        return _Screened(entry, fp, None, f"criterion {verdict.criterion}: {verdict.reason}")
    match = Acceptance(entry.smiles, entry.name, seeds[index].name, similarity)
    return _Screened(entry, fp, match, "")


def select_candidates(
    seeds: Sequence[str | PoolEntry],
    pool: Iterable[str | PoolEntry],
    cfg: SelectionConfig,
    *,
    fingerprinter: Fingerprinter | None = None,
    workers: int | None = None,
) -> SelectionResult:
    """
    Screen ``pool`` in order against ``seeds``.

    Args:
        seeds: Seed SMILES (or named entries); a seed's name defaults to its SMILES
        pool: Candidate SMILES (or named entries)
        cfg: Thresholds
        fingerprinter: Replaces Morgan fingerprinting, e.g. with crafted bitsets
        workers: Thread count for screening (capped by ``ATOMKIT_THREADS``)

    Returns:
        Accepted entries with their matched seed, and rejections with reasons

    Raises:
        SmilesParseError: If a seed does not parse
    """
    fingerprint = fingerprinter or cfg.fingerprinter()
    parsed_seeds = []
    for item in seeds:
        entry = _as_entry(item)
        mol = parse_smiles(entry.smiles)
        parsed_seeds.append(_Seed(entry.name or entry.smiles, mol, fingerprint(mol)))

    entries = [_as_entry(item) for item in pool]
    chunk = len(entries) if cfg.max_accepted is None else SCREEN_CHUNK
    result = SelectionResult()
    kept: list[tuple[str, Fingerprint]] = []
    for lo in range(0, len(entries), max(chunk, 1)):
        screened = ordered_map(
            lambda entry: _screen(entry, parsed_seeds, cfg, fingerprint),
            entries[lo : lo + chunk],
            workers,
        )
        for item in screened:
            result.screened += 1
            reason = item.reason
            if item.match is not None and item.fingerprint is not None:
                reason = _clash(item.fingerprint, kept, cfg)
                if not reason:
                    result.accepted.append(item.match)
                    kept.append((item.entry.smiles, item.fingerprint))
            if reason:
                logger.debug("rejected %s: %s", item.entry.smiles, reason)
                result.rejected.append(Rejection(item.entry.smiles, item.entry.name, reason))
            if result.target_reached(cfg):
                logger.info(
                    "reached %d accepted after %d candidates", len(result.accepted), result.screened
                )
                return result
    logger.info("selected %d of %d candidates", len(result.accepted), result.screened)
    return result


def _clash(fp: Fingerprint, kept: Sequence[tuple[str, Fingerprint]], cfg: SelectionConfig) -> str:
    for smiles, other in kept:
        similarity = tanimoto(fp, other)
        if similarity > cfg.accepted_cap:
            return f"similarity {similarity:.4f} to accepted {smiles} exceeds {cfg.accepted_cap}"
    return ""


def read_smiles_file(path: str | Path) -> list[PoolEntry]:
    """
    One SMILES per line with an optional tab-separated name.

    Blank lines and lines starting with ``#`` are skipped.
    """
    entries = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        text = line.strip()
        if not text or text.startswith("#"):
            continue
        smiles, _, name = text.partition("\t")
        entries.append(PoolEntry(smiles.strip(), name.strip()))
    return entries


def write_selection_csv(accepted: Iterable[Acceptance], path: str | Path) -> Path:
    """Accepted candidates under ``smiles, name, matched_seed, seed_similarity``."""
    target = Path(path)
    with target.open("w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(SELECTION_HEADER)
        writer.writerows(item.as_row() for item in accepted)
    return target


def write_rejection_log(rejected: Iterable[Rejection], path: str | Path) -> Path:
    """Rejections under ``smiles, name, reason``."""
    target = Path(path)
    with target.open("w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(REJECTION_HEADER)
        writer.writerows((r.smiles, r.name, r.reason) for r in rejected)
    return target

"""
Run manifests and metrics CSVs.

A manifest is a JSON object describing one CLI run: the command, its
configuration and seed, a SHA-256 of every input file, the results and the
paths of the artifacts written. It carries no timestamps or durations, so
identical runs produce identical manifests, and ``manifest_sha256`` (the
hash of the canonical JSON of everything else) changes whenever an input
does.
"""

from __future__ import annotations

import csv
import hashlib
import json
from collections.abc import Iterable, Mapping, Sequence
from pathlib import Path
from typing import Any

from .metrics import EpochRecord, MetricsReport

METRICS_HEADER = ("epoch", "train_loss", "val_s2s", "val_s2t")
MANIFEST_NAME = "manifest.json"
_CHUNK = 1 << 20


def sha256_file(path: str | Path) -> str:
    """Hex SHA-256 of a file's bytes."""
    digest = hashlib.sha256()
    with Path(path).open("rb") as handle:
        while chunk := handle.read(_CHUNK):
            digest.update(chunk)
    return digest.hexdigest()


def _canonical(payload: Mapping[str, Any]) -> bytes:
    return json.dumps(payload, sort_keys=True, separators=(",", ":")).encode("utf-8")


def report_summary(report: MetricsReport) -> dict[str, Any]:
    """Deterministic part of a report, for manifests."""
    return {
        "s2s": report.s2s,
        "s2t": report.s2t,
        "baseline_s2s": report.baseline_s2s,
        "baseline_s2t": report.baseline_s2t,
        "best_epoch": report.best_epoch,
        "train_loss": report.losses,
        "val_s2s": [record.val_s2s for record in report.epochs],
        "val_s2t": [record.val_s2t for record in report.epochs],
        "test_s2s": report.test_s2s,
        "test_s2t": report.test_s2t,
    }


def build_manifest(
    command: str,
    *,
    seed: int | None,
    inputs: Sequence[str | Path] = (),
    config: Mapping[str, Any] | None = None,
    results: Mapping[str, Any] | None = None,
    outputs: Mapping[str, str | Path] | None = None,
) -> dict[str, Any]:
    """
    Assemble a manifest and stamp it with ``manifest_sha256``.

    Examples:
        >>> m = build_manifest("analyze", seed=0)
        >>> sorted(m)
        ['command', 'config', 'inputs', 'manifest_sha256', 'outputs', 'results', 'seed']
    """
    payload: dict[str, Any] = {
        "command": command,
        "seed": seed,
        "config": dict(config or {}),
        "inputs": {str(path): sha256_file(path) for path in inputs},
        "results": dict(results or {}),
        "outputs": {key: str(value) for key, value in (outputs or {}).items()},
    }
    payload["manifest_sha256"] = hashlib.sha256(_canonical(payload)).hexdigest()
    return payload


def write_manifest(manifest: Mapping[str, Any], path: str | Path) -> Path:
    """Write ``manifest`` as indented, key-sorted JSON."""
    target = Path(path)
    target.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return target


def write_metrics_csv(records: Iterable[EpochRecord], path: str | Path) -> Path:
    """One row per epoch under ``epoch, train_loss, val_s2s, val_s2t``."""
    target = Path(path)
    with target.open("w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(METRICS_HEADER)
        writer.writerows(
            (r.epoch, repr(r.train_loss), repr(r.val_s2s), repr(r.val_s2t)) for r in records
        )
    return target

"""Tests for run manifests and metrics CSVs."""

import json

import pytest

from atomkit.training import (
    EpochRecord,
    MetricsReport,
    build_manifest,
    report_summary,
    sha256_file,
    write_manifest,
    write_metrics_csv,
)


def test_sha256_file(tmp_path) -> None:
    """Test the digest of a known byte string."""
    path = tmp_path / "abc.txt"
    path.write_bytes(b"abc")
    assert sha256_file(path) == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"


def test_manifest_is_deterministic_and_tracks_inputs(tmp_path) -> None:
    """Test identical runs hash alike and any input change alters the hash."""
    data = tmp_path / "traj.atrj"
    data.write_bytes(b"frames")
    first = build_manifest("train", seed=1, inputs=[data], config={"lr": 0.001}, results={"s2t": 0.5})
    second = build_manifest("train", seed=1, inputs=[data], config={"lr": 0.001}, results={"s2t": 0.5})
    assert first == second
    assert first["inputs"] == {str(data): sha256_file(data)}

    data.write_bytes(b"other frames")
    changed = build_manifest("train", seed=1, inputs=[data], config={"lr": 0.001}, results={"s2t": 0.5})
    assert changed["manifest_sha256"] != first["manifest_sha256"]
    assert build_manifest("train", seed=2)["manifest_sha256"] != build_manifest("train", seed=1)["manifest_sha256"]


def test_manifest_missing_input(tmp_path) -> None:
    """Test an absent input file surfaces as OSError."""
    with pytest.raises(OSError):
        build_manifest("eval", seed=None, inputs=[tmp_path / "absent"])


def test_write_manifest_sorts_keys(tmp_path) -> None:
    """Test the written JSON is key-sorted and loads back unchanged."""
    manifest = build_manifest("analyze", seed=0, outputs={"sweep": tmp_path / "p.csv"})
    path = write_manifest(manifest, tmp_path / "manifest.json")
    text = path.read_text()
    assert json.loads(text) == manifest
    keys = [line.split('"')[1] for line in text.splitlines() if line.startswith('  "')]
    assert keys == sorted(keys)
    assert "seconds" not in text


def test_metrics_csv_and_summary(tmp_path) -> None:
    """Test one CSV row per epoch and a summary without timings."""
    records = (EpochRecord(1, 2.0, 1.5, 1.25), EpochRecord(2, 1.0, 0.5, 0.75))
    path = write_metrics_csv(records, tmp_path / "metrics.csv")
    assert path.read_text().splitlines() == [
        "epoch,train_loss,val_s2s,val_s2t",
        "1,2.0,1.5,1.25",
        "2,1.0,0.5,0.75",
    ]
    report = MetricsReport(0.5, 0.75, 2.0, 3.0, epochs=records, best_epoch=2, seconds=9.5)
    summary = report_summary(report)
    assert summary["train_loss"] == [2.0, 1.0]
    assert summary["val_s2s"] == [1.5, 0.5]
    assert summary["best_epoch"] == 2
    assert "seconds" not in summary

"""Tests for similarity-window candidate selection."""

import pytest

from atomkit.core import ConfigurationError, SmilesParseError
from atomkit.curation import (
    Fingerprint,
    MoleculeGraph,
    PoolEntry,
    SelectionConfig,
    read_smiles_file,
    select_candidates,
    write_rejection_log,
    write_selection_csv,
)

SEED = "CCCCCCCC"
NBITS = 64

# Seed bits 0-39. Each crafted candidate shares 36 of them (similarity 0.9);
# "CCCCCCO" duplicates "CCCCCCC" and "CCCCCCN" overlaps it at exactly 0.8.
CRAFTED = {
    SEED: range(40),
    "CCCCCCC": range(36),
    "CCCCCCO": range(36),
    "CCCCCCN": range(4, 40),
    "CC": range(10),
    "CCCCCCCCC": range(36),
}


def crafted_fingerprint(mol: MoleculeGraph) -> Fingerprint:
    """Look up hand-made bits by SMILES."""
    return Fingerprint.from_bits(CRAFTED[mol.smiles], nbits=NBITS)


POOL = ["CCCCCCC", "CCCCCCO", "CCCCCCN", "CC", "C(", "CCCCCCCCC", SEED]


def _reasons(result) -> dict[str, str]:
    return {r.smiles: r.reason for r in result.rejected}


def test_main_text_preset() -> None:
    """Test the loose cap admits the candidate that overlaps an accepted one at exactly the cap."""
    result = select_candidates(
        [SEED], POOL, SelectionConfig.preset("main-text"), fingerprinter=crafted_fingerprint
    )
    assert [a.smiles for a in result.accepted] == ["CCCCCCC", "CCCCCCN"]
    assert all(a.matched_seed == SEED for a in result.accepted)
    assert result.accepted[0].seed_similarity == pytest.approx(0.9)

    reasons = _reasons(result)
    assert [r.smiles for r in result.rejected] == ["CCCCCCO", "CC", "C(", "CCCCCCCCC", SEED]
    assert reasons["CCCCCCO"].startswith("similarity 1.0000 to accepted CCCCCCC")
    assert "outside" in reasons["CC"]
    assert reasons["C("].startswith("unparseable")
    assert reasons["CCCCCCCCC"].startswith("criterion 2")
    assert "1.0000 outside" in reasons[SEED]


def test_appendix_preset_is_stricter() -> None:
    """Test the tight cap rejects the candidate overlapping an accepted one."""
    result = select_candidates(
        [SEED], POOL, SelectionConfig.preset("appendix"), fingerprinter=crafted_fingerprint
    )
    assert [a.smiles for a in result.accepted] == ["CCCCCCC"]
    assert "exceeds 0.2" in _reasons(result)["CCCCCCN"]


def test_pool_order_decides_between_near_duplicates() -> None:
    """Test the earlier of two near-duplicates wins."""
    cfg = SelectionConfig.preset("main-text")
    result = select_candidates([SEED], ["CCCCCCO", "CCCCCCC"], cfg, fingerprinter=crafted_fingerprint)
    assert [a.smiles for a in result.accepted] == ["CCCCCCO"]


def test_worker_count_does_not_change_the_result() -> None:
    """Test threaded screening matches a sequential run."""
    cfg = SelectionConfig.preset("main-text")
    one = select_candidates([SEED], POOL, cfg, fingerprinter=crafted_fingerprint, workers=1)
    many = select_candidates([SEED], POOL, cfg, fingerprinter=crafted_fingerprint, workers=4)
    assert one == many


def test_empty_pool_and_named_entries() -> None:
    """Test an empty pool selects nothing and names carry through."""
    cfg = SelectionConfig.preset("main-text")
    assert select_candidates(["CCO"], [], cfg).accepted == []
    result = select_candidates(
        [PoolEntry(SEED, "octane")],
        [PoolEntry("CCCCCCC", "heptane")],
        cfg,
        fingerprinter=crafted_fingerprint,
    )
    assert result.accepted[0].name == "heptane"
    assert result.accepted[0].matched_seed == "octane"


def test_real_fingerprints_reject_the_seed_itself() -> None:
    """Test Morgan bits put a molecule at similarity 1 to itself, outside the window."""
    result = select_candidates(["CCO"], ["OCC"], SelectionConfig.preset("main-text"))
    assert result.accepted == []
    assert "1.0000" in result.rejected[0].reason


def test_bad_seed_raises() -> None:
    """Test an unparseable seed is an error, not a rejection."""
    with pytest.raises(SmilesParseError):
        select_candidates(["C("], ["CC"], SelectionConfig.preset("main-text"))


def test_selection_config() -> None:
    """Test presets, overrides and validation."""
    assert SelectionConfig.preset("main-text").accepted_cap == 0.8
    assert SelectionConfig.preset("appendix", lower=0.5).lower == 0.5
    assert SelectionConfig.from_dict({"preset": "appendix"}).accepted_cap == 0.2
    assert SelectionConfig.from_dict({"accepted_cap": 0.5}, lower=0.1).lower == 0.1
    cfg = SelectionConfig.from_dict({"preset": "main-text", "accepted_cap": 0.7})
    assert cfg.accepted_cap == 0.7
    with pytest.raises(ConfigurationError, match="accepted_cap or a preset"):
        SelectionConfig.from_dict({})
    with pytest.raises(ConfigurationError):
        SelectionConfig.preset("draft")
    with pytest.raises(ConfigurationError):
        SelectionConfig(accepted_cap=1.5)
    with pytest.raises(ConfigurationError):
        SelectionConfig(accepted_cap=0.5, nbits=0)
    with pytest.raises(ConfigurationError, match="max_accepted"):
        SelectionConfig(accepted_cap=0.5, max_accepted=0)
    assert SelectionConfig.from_dict({"preset": "appendix", "max_accepted": 40}).max_accepted == 40


def test_smiles_file_round_trip(tmp_path) -> None:
    """Test comments and blank lines are skipped and outputs carry headers."""
    source = tmp_path / "pool.smi"
    source.write_text("# pool\nCCCCCCC\theptane\n\n  CC  \n", encoding="utf-8")
    entries = read_smiles_file(source)
    assert entries == [PoolEntry("CCCCCCC", "heptane"), PoolEntry("CC", "")]

    result = select_candidates(
        [SEED], entries, SelectionConfig.preset("main-text"), fingerprinter=crafted_fingerprint
    )
    accepted = write_selection_csv(result.accepted, tmp_path / "selected.csv").read_text().splitlines()
    assert accepted == ["smiles,name,matched_seed,seed_similarity", "CCCCCCC,heptane,CCCCCCCC,0.9"]
    rejected = write_rejection_log(result.rejected, tmp_path / "rejected.csv").read_text().splitlines()
    assert rejected[0] == "smiles,name,reason"
    assert rejected[1].startswith("CC,,")

"""Selection over the committed thirty-molecule corpus with real fingerprints."""

from pathlib import Path

import pytest

from atomkit.curation import (
    PoolEntry,
    SelectionConfig,
    SelectionResult,
    morgan_fingerprint,
    parse_smiles,
    read_smiles_file,
    select_candidates,
    tanimoto,
)

DATA = Path(__file__).parent / "data"

# Wide enough that no two environment codes of the corpus fold onto one bit,
# so similarities are ratios of distinct atom environments.
WIDE = 1 << 22

# Linear chains reduce to a handful of environments: a long alkane has 9,
# hexane the same minus the all-CH2 radius-2 one, a long primary alcohol 15,
# butane-1,4-diol 8 of the 9 of a long diol.
PAIRS = [
    ("CCCCCC", "CCCCCCCCCC", 8 / 9),
    ("CCCCC", "CCCCCCCCCC", 7 / 10),
    ("CCCC", "CCCCCCCCCC", 5 / 10),
    ("CCCCCCC", "CCCCCCCCCC", 1.0),
    ("OCCCCO", "OCCCCCCCCCCCCCCCCCCO", 8 / 9),
    ("OCCCO", "OCCCCCCCCCCCCCCCCCCO", 7 / 10),
    ("NCCCCN", "NCCCCCCCCCCCCN", 8 / 9),
    ("SCCCCS", "SCCCCCCCS", 8 / 9),
    ("CCCCCCO", "CCCCCCCCO.CC", 15 / 17),
    ("CCCCCCCCCCCO", "CCCCCCCCO.CC", 15 / 17),
    ("CCCCCCO", "CCCCCC", 8 / 15),
    ("CCCCCCO", "OCCCCO", 8 / 15),
    ("NCCCCN", "OCCCCO", 2 / 14),
    ("OCCCCO", "CCCCCC", 2 / 14),
    ("OCCCCN", "OCCCCCCCCCCCCCCCCCCO", 8 / 15),
    ("OCCCCO.OCCCCO.OCCCCO", "OCCCCO", 1.0),
]

MAIN_TEXT_ACCEPTED = ["hexane", "butanediol", "hexanol", "butanediamine"]
APPENDIX_ACCEPTED = ["hexane", "butanediol", "butanediamine"]

# Reason prefixes shared by both presets.
FIXED_REASONS = {
    "octane": "best seed similarity 1.0000 outside",
    "pentane": "best seed similarity 0.7000 outside",
    "hexane-branch-syntax": "similarity 1.0000 to accepted CCCCCC",
    "undecanol": "criterion 2",
    "butanedithiol": "criterion 3",
    "butanediol-trimer": "criterion 4",
    "butanediamine-dimer": "criterion 5",
    "butanediol-dimer": "criterion 6",
    "propanediol": "best seed similarity 0.7000 outside",
    "pentanediol": "best seed similarity 1.0000 outside",
    "benzene": "best seed similarity 0.0000 outside",
    "unclosed-branch": "unparseable",
    "pentanediamine": "best seed similarity 1.0000 outside",
    "butane": "best seed similarity 0.5000 outside",
    "nonane": "best seed similarity 1.0000 outside",
    "hexanediol": "best seed similarity 1.0000 outside",
    "pentanedithiol": "best seed similarity 1.0000 outside",
    "methane": "best seed similarity 0.0000 outside",
    "propanediamine": "best seed similarity 0.7000 outside",
    "water": "best seed similarity 0.0000 outside",
    "aminobutanol": "best seed similarity 0.5333 outside",
    "heptane": "best seed similarity 1.0000 outside",
}


@pytest.fixture(scope="module")
def seeds() -> list[PoolEntry]:
    """Seed entries of the corpus."""
    return read_smiles_file(DATA / "seeds.smi")


@pytest.fixture(scope="module")
def pool() -> list[PoolEntry]:
    """Pool entries of the corpus."""
    return read_smiles_file(DATA / "corpus.smi")


def _run(
    seeds: list[PoolEntry], pool: list[PoolEntry], preset: str, nbits: int = WIDE
) -> SelectionResult:
    return select_candidates(seeds, pool, SelectionConfig.preset(preset, nbits=nbits))


@pytest.mark.parametrize(("a", "b", "expected"), PAIRS)
def test_hand_counted_similarities(a: str, b: str, expected: float) -> None:
    """Test Tanimoto values against environment counts worked out by hand."""
    fa = morgan_fingerprint(parse_smiles(a), nbits=WIDE)
    fb = morgan_fingerprint(parse_smiles(b), nbits=WIDE)
    assert tanimoto(fa, fb) == pytest.approx(expected)


def test_corpus_size(seeds: list[PoolEntry], pool: list[PoolEntry]) -> None:
    """Test the corpus holds thirty candidates and five seeds."""
    assert len(pool) == 30
    assert len(seeds) == 5


def test_main_text_preset_on_corpus(seeds: list[PoolEntry], pool: list[PoolEntry]) -> None:
    """Test the 0.80 cap accepts the alcohol that half-overlaps hexane."""
    result = _run(seeds, pool, "main-text")
    assert [a.name for a in result.accepted] == MAIN_TEXT_ACCEPTED
    assert [a.matched_seed for a in result.accepted] == [
        "decane",
        "octadecanediol",
        "octanol+ethane",
        "dodecanediamine",
    ]
    assert result.accepted[0].seed_similarity == pytest.approx(8 / 9)
    assert result.accepted[2].seed_similarity == pytest.approx(15 / 17)

    reasons = {r.name: r.reason for r in result.rejected}
    assert len(reasons) == 26
    assert reasons["heptanol"].startswith("similarity 1.0000 to accepted CCCCCCO exceeds 0.8")
    for name, prefix in FIXED_REASONS.items():
        assert reasons[name].startswith(prefix), name


def test_appendix_preset_on_corpus(seeds: list[PoolEntry], pool: list[PoolEntry]) -> None:
    """Test the 0.2 cap turns away both alcohols for overlapping hexane."""
    result = _run(seeds, pool, "appendix")
    assert [a.name for a in result.accepted] == APPENDIX_ACCEPTED

    reasons = {r.name: r.reason for r in result.rejected}
    assert len(reasons) == 27
    assert reasons["hexanol"].startswith("similarity 0.5333 to accepted CCCCCC exceeds 0.2")
    assert reasons["heptanol"].startswith("similarity 0.5333 to accepted CCCCCC exceeds 0.2")
    for name, prefix in FIXED_REASONS.items():
        assert reasons[name].startswith(prefix), name


@pytest.mark.parametrize("preset", ["main-text", "appendix"])
def test_doubling_the_width_keeps_every_decision(
    seeds: list[PoolEntry], pool: list[PoolEntry], preset: str
) -> None:
    """Test accept/reject outcomes survive a twice-as-wide fingerprint."""
    narrow = _run(seeds, pool, preset, WIDE)
    wide = _run(seeds, pool, preset, 2 * WIDE)
    assert [a.name for a in wide.accepted] == [a.name for a in narrow.accepted]
    assert [r.name for r in wide.rejected] == [r.name for r in narrow.rejected]
    assert [r.reason.split(":")[0] for r in wide.rejected] == [
        r.reason.split(":")[0] for r in narrow.rejected
    ]


@pytest.mark.parametrize(
    ("target", "names", "screened"), [(1, ["hexane"], 1), (3, MAIN_TEXT_ACCEPTED[:3], 5)]
)
def test_accepted_target_stops_the_run(
    seeds: list[PoolEntry], pool: list[PoolEntry], target: int, names: list[str], screened: int
) -> None:
    """Test screening stops at the accepted-count target and reports how far it got."""
    cfg = SelectionConfig.preset("main-text", nbits=WIDE, max_accepted=target)
    result = select_candidates(seeds, pool, cfg)
    assert [a.name for a in result.accepted] == names
    assert result.screened == screened
    assert len(result.accepted) + len(result.rejected) == screened


def test_target_beyond_the_pool_screens_everything(
    seeds: list[PoolEntry], pool: list[PoolEntry]
) -> None:
    """Test an unreachable target behaves like no target."""
    cfg = SelectionConfig.preset("main-text", nbits=WIDE, max_accepted=40)
    result = select_candidates(seeds, pool, cfg, workers=2)
    assert [a.name for a in result.accepted] == MAIN_TEXT_ACCEPTED
    assert result.screened == 30

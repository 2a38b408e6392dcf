"""Tests for circular fingerprints and Tanimoto similarity."""

import numpy as np
import pytest

from atomkit.core import ShapeError
from atomkit.curation import Fingerprint, fnv1a_64, morgan_fingerprint, parse_smiles, tanimoto


def _fp(smiles: str, **kwargs: int) -> Fingerprint:
    return morgan_fingerprint(parse_smiles(smiles), **kwargs)


def test_fnv1a_reference_values() -> None:
    """Test the published FNV-1a 64-bit vectors."""
    assert fnv1a_64(b"") == 0xCBF29CE484222325
    assert fnv1a_64(b"a") == 0xAF63DC4C8601EC8C
    assert fnv1a_64(b"foobar") == 0x85944171F73967E8


@pytest.mark.parametrize(("a", "b"), [("OCC", "CCO"), ("OC(C)C", "CC(C)O"), ("c1ccncc1", "n1ccccc1")])
def test_fingerprint_ignores_atom_order(a: str, b: str) -> None:
    """Test different spellings of one molecule give the same bits."""
    assert _fp(a) == _fp(b)


def test_fingerprint_distinguishes_structure() -> None:
    """Test rings, heteroatoms and bond orders change the bits."""
    assert _fp("CCCCCC") != _fp("C1CCCCC1")
    assert _fp("CCO") != _fp("CCN")
    assert _fp("C=C") != _fp("CC")


def test_radius_and_width() -> None:
    """Test radius 0 sets one bit per distinct atom environment."""
    assert _fp("C", radius=0).popcount == 1
    assert _fp("CC", radius=0).popcount == 1
    assert _fp("CCO", radius=0, nbits=1 << 20).popcount == 3
    fp = _fp("CCO", nbits=64)
    assert fp.nbits == 64
    assert fp.bits < 1 << 64
    with pytest.raises(ShapeError):
        _fp("C", radius=-1)


def test_fingerprint_reproducible() -> None:
    """Test bits are stable across calls."""
    assert _fp("CC(=O)Oc1ccccc1C(=O)O").bits == _fp("CC(=O)Oc1ccccc1C(=O)O").bits


def test_tanimoto_values() -> None:
    """Test crafted overlaps."""
    a = Fingerprint.from_bits([0, 1, 2], nbits=8)
    b = Fingerprint.from_bits([1, 2, 3], nbits=8)
    assert tanimoto(a, b) == pytest.approx(0.5)
    assert tanimoto(a, a) == 1.0
    assert tanimoto(a, Fingerprint.from_bits([5, 6], nbits=8)) == 0.0
    assert tanimoto(Fingerprint(0, 8), Fingerprint(0, 8)) == 0.0
    assert tanimoto(a, b) == tanimoto(b, a)


def test_tanimoto_width_mismatch() -> None:
    """Test fingerprints of different widths cannot be compared."""
    with pytest.raises(ShapeError):
        tanimoto(Fingerprint(1, 8), Fingerprint(1, 16))


def test_fingerprint_validation_and_views() -> None:
    """Test bit ranges are enforced and the array view matches the set bits."""
    with pytest.raises(ShapeError):
        Fingerprint(16, 4)
    with pytest.raises(ShapeError):
        Fingerprint.from_bits([8], nbits=8)
    fp = Fingerprint.from_bits([1, 3], nbits=4)
    assert fp.on_bits == (1, 3)
    assert np.array_equal(fp.to_array(), [False, True, False, True])

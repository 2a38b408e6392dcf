"""
Morgan-style circular fingerprints and Tanimoto similarity.

Every heavy atom starts from a hash of (element, heavy degree, hydrogen
count, ring membership). Each round rehashes an atom's code with the sorted
(bond order, neighbour code) pairs of its heavy neighbours. The code of
every atom at every round sets bit ``code % nbits``. Hashes are 64-bit
FNV-1a over a fixed byte encoding, so fingerprints are reproducible across
processes. Bits do not match RDKit's ECFP; only the procedure is the same.
"""

from __future__ import annotations

from collections.abc import Iterable
from dataclasses import dataclass

import numpy as np
import numpy.typing as npt

from ..core.errors import ShapeError
from .smiles import MoleculeGraph

DEFAULT_RADIUS = 2
DEFAULT_NBITS = 2048

FNV_OFFSET = 0xCBF29CE484222325
FNV_PRIME = 0x100000001B3
_MASK64 = (1 << 64) - 1


def fnv1a_64(data: bytes) -> int:
    """
    64-bit FNV-1a hash.

    Examples:
        >>> hex(fnv1a_64(b""))
        '0xcbf29ce484222325'
        >>> hex(fnv1a_64(b"a"))
        '0xaf63dc4c8601ec8c'
    """
    h = FNV_OFFSET
    for byte in data:
        h ^= byte
        h = (h * FNV_PRIME) & _MASK64
    return h


def _encode(values: Iterable[object]) -> bytes:
    return "\x1f".join(str(v) for v in values).encode("ascii")


@dataclass(frozen=True)
class Fingerprint:
    """
    Fixed-width bitset stored as a Python integer.

    Examples:
        >>> fp = Fingerprint.from_bits([1, 5], nbits=8)
        >>> fp.on_bits, fp.popcount
        ((1, 5), 2)
    """

    bits: int
    nbits: int = DEFAULT_NBITS

    def __post_init__(self) -> None:
        """Check the bits fit the width."""
        if self.nbits < 1:
            raise ShapeError(f"fingerprint width must be >= 1, got {self.nbits}")
        if self.bits < 0 or self.bits >> self.nbits:
            raise ShapeError(f"bits do not fit a {self.nbits}-bit fingerprint")

    @classmethod
    def from_bits(cls, on: Iterable[int], nbits: int = DEFAULT_NBITS) -> Fingerprint:
        """Fingerprint with the given bit indices set."""
        value = 0
        for bit in on:
            if not 0 <= bit < nbits:
                raise ShapeError(f"bit {bit} outside a {nbits}-bit fingerprint")
            value |= 1 << bit
        return cls(value, nbits)

    @property
    def popcount(self) -> int:
        """Number of set bits."""
        return self.bits.bit_count()

    @property
    def on_bits(self) -> tuple[int, ...]:
        """Indices of the set bits in increasing order."""
        return tuple(i for i in range(self.nbits) if self.bits >> i & 1)

    def to_array(self) -> npt.NDArray[np.bool_]:
        """Boolean array of length ``nbits``."""
        out = np.zeros(self.nbits, dtype=bool)
        out[list(self.on_bits)] = True
        return out


def atom_invariants(mol: MoleculeGraph) -> dict[int, int]:
    """Initial hashed code of each heavy atom."""
    return {
        i: fnv1a_64(
            _encode(
                (
                    "atom",
                    mol.atoms[i].element,
                    mol.heavy_degree(i),
                    mol.total_hydrogens(i),
                    int(mol.atoms[i].in_ring),
                )
            )
        )
        for i in mol.heavy_atoms
    }


def morgan_fingerprint(
    mol: MoleculeGraph, radius: int = DEFAULT_RADIUS, nbits: int = DEFAULT_NBITS
) -> Fingerprint:
    """
    Circular fingerprint of ``mol``.

    Args:
        mol: Parsed molecule
        radius: Number of neighbourhood rounds (2 is the ECFP-4 analogue)
        nbits: Fingerprint width

    Returns:
        The folded bitset

    Examples:
        >>> from atomkit.curation.smiles import parse_smiles
        >>> morgan_fingerprint(parse_smiles("CCO")) == morgan_fingerprint(parse_smiles("OCC"))
        True
    """
    if radius < 0:
        raise ShapeError(f"radius must be >= 0, got {radius}")
    codes = atom_invariants(mol)
    value = 0
    for code in codes.values():
        value |= 1 << (code % nbits)
    for round_index in range(1, radius + 1):
        codes = {
            i: fnv1a_64(
                _encode(
                    (
                        round_index,
                        code,
                        *sorted(
                            (int(order), codes[j])
                            for j, order in mol.adjacency[i]
                            if j in codes
                        ),
                    )
                )
            )
            for i, code in codes.items()
        }
        for code in codes.values():
            value |= 1 << (code % nbits)
    return Fingerprint(value, nbits)


def tanimoto(a: Fingerprint, b: Fingerprint) -> float:
    """
    |a AND b| / |a OR b|, with 0/0 defined as 0.

    Raises:
        ShapeError: If the widths differ

    Examples:
        >>> tanimoto(Fingerprint(0b0111, 4), Fingerprint(0b1110, 4))
        0.5
    """
    if a.nbits != b.nbits:
        raise ShapeError(f"fingerprint widths differ: {a.nbits} vs {b.nbits}")
    union = (a.bits | b.bits).bit_count()
    return (a.bits & b.bits).bit_count() / union if union else 0.0

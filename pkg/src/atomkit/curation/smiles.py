"""
Parser for the organic subset of SMILES.

Supported: the organic-subset elements (``B C N O P S F Cl Br I``), aromatic
``b c n o p s``, bracket atoms holding an element and an optional hydrogen
count (``[CH2]``, ``[nH]``, ``[H]``), branches, ring closures ``0-9`` and
``%nn``, bond symbols ``- = #`` and ``.`` between fragments. Charges,
isotopes, stereo marks and atom classes are rejected.

Implicit hydrogens follow the standard valences (C 4, N 3 or 5, O 2, ...).
Lowercase atoms are taken as aromatic as written; each contributes one
extra valence unit and aromatic bonds count as single.
"""

from __future__ import annotations

import enum
import re
from collections import Counter
from dataclasses import dataclass
from functools import cached_property

from ..core.errors import SmilesParseError

VALENCES: dict[str, tuple[int, ...]] = {
    "B": (3,),
    "C": (4,),
    "N": (3, 5),
    "O": (2,),
    "P": (3, 5),
    "S": (2, 4, 6),
    "F": (1,),
    "Cl": (1,),
    "Br": (1,),
    "I": (1,),
    "H": (1,),
}
AROMATIC = frozenset({"b", "c", "n", "o", "p", "s"})
_TWO_LETTER = ("Cl", "Br")
_BRACKET = re.compile(r"^(?P<element>[A-Z][a-z]?|[bcnops])(?P<h>H(?P<hcount>\d)?)?$")


class BondOrder(enum.IntEnum):
    """Bond multiplicity; aromatic bonds are a separate kind."""

    SINGLE = 1
    DOUBLE = 2
    TRIPLE = 3
    AROMATIC = 4

    @property
    def valence(self) -> int:
        """Valence units the bond uses at each end."""
        return 1 if self is BondOrder.AROMATIC else int(self)


_BOND_SYMBOLS = {"-": BondOrder.SINGLE, "=": BondOrder.DOUBLE, "#": BondOrder.TRIPLE}


@dataclass(frozen=True)
class Atom:
    """
    One atom as written.

    Attributes:
        element: Capitalised element symbol
        aromatic: Written in lowercase
        hydrogens: Implicit (or bracket) hydrogen count
        in_ring: Member of at least one ring
        position: Index of the atom in the SMILES string
    """

    element: str
    aromatic: bool
    hydrogens: int
    in_ring: bool
    position: int


@dataclass(frozen=True)
class Bond:
    """Undirected bond between atom indices ``i < j``."""

    i: int
    j: int
    order: BondOrder


@dataclass(frozen=True, eq=False)
class MoleculeGraph:
    """
    Parsed molecule.

    Hydrogens written as ``[H]`` atoms stay in ``atoms``; everything that
    counts hydrogens includes them.

    Examples:
        >>> mol = parse_smiles("CCO")
        >>> mol.n_heavy_atoms, [(b.i, b.j) for b in mol.bonds]
        (3, [(0, 1), (1, 2)])
    """

    smiles: str
    atoms: tuple[Atom, ...]
    bonds: tuple[Bond, ...]

    def __len__(self) -> int:
        return len(self.atoms)

    @cached_property
    def adjacency(self) -> tuple[tuple[tuple[int, BondOrder], ...], ...]:
        """For every atom, its (neighbour, bond order) pairs."""
        table: list[list[tuple[int, BondOrder]]] = [[] for _ in self.atoms]
        for bond in self.bonds:
            table[bond.i].append((bond.j, bond.order))
            table[bond.j].append((bond.i, bond.order))
        return tuple(tuple(row) for row in table)

    @cached_property
    def heavy_atoms(self) -> tuple[int, ...]:
        """Indices of non-hydrogen atoms."""
        return tuple(i for i, atom in enumerate(self.atoms) if atom.element != "H")

    @property
    def n_heavy_atoms(self) -> int:
        """Number of non-hydrogen atoms."""
        return len(self.heavy_atoms)

    def total_hydrogens(self, index: int) -> int:
        """Implicit plus explicitly bonded hydrogens of one atom."""
        explicit = sum(1 for j, _ in self.adjacency[index] if self.atoms[j].element == "H")
        return self.atoms[index].hydrogens + explicit

    def heavy_degree(self, index: int) -> int:
        """Number of non-hydrogen neighbours."""
        return sum(1 for j, _ in self.adjacency[index] if self.atoms[j].element != "H")

    def element_counts(self) -> Counter[str]:
        """
        Atom count per element, hydrogens included.

        Examples:
            >>> dict(parse_smiles("CO").element_counts())
            {'C': 1, 'O': 1, 'H': 4}
        """
        counts: Counter[str] = Counter()
        for atom in self.atoms:
            counts[atom.element] += 1
            if atom.hydrogens:
                counts["H"] += atom.hydrogens
        return counts

    @cached_property
    def components(self) -> tuple[tuple[int, ...], ...]:
        """Connected components as sorted atom index tuples."""
        return tuple(tuple(sorted(c)) for c in _components(len(self.atoms), self.bonds))

    def is_connected(self) -> bool:
        """True for a single fragment."""
        return len(self.components) <= 1

    @property
    def ring_count(self) -> int:
        """
        Number of independent rings (bonds - atoms + fragments).

        Examples:
            >>> parse_smiles("c1ccc2ccccc2c1").ring_count
            2
        """
        return len(self.bonds) - len(self.atoms) + len(self.components)


def _components(n: int, bonds: tuple[Bond, ...] | list[Bond]) -> list[set[int]]:
    parent = list(range(n))

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for bond in bonds:
        parent[find(bond.i)] = find(bond.j)
    groups: dict[int, set[int]] = {}
    for a in range(n):
        groups.setdefault(find(a), set()).add(a)
    return sorted(groups.values(), key=min)


def _ring_atoms(n: int, bonds: list[Bond]) -> set[int]:
    """Atoms on a bond whose removal keeps its ends connected."""
    in_ring: set[int] = set()
    for k, bond in enumerate(bonds):
        rest = bonds[:k] + bonds[k + 1 :]
        if any(bond.i in c and bond.j in c for c in _components(n, rest)):
            in_ring.update((bond.i, bond.j))
    return in_ring


@dataclass
class _PendingAtom:
    element: str
    aromatic: bool
    bracket_h: int | None
    position: int


class _Parser:
    """Single pass over the string keeping an anchor atom and a branch stack."""

    def __init__(self, smiles: str) -> None:
        self.smiles = smiles
        self.atoms: list[_PendingAtom] = []
        self.bonds: list[Bond] = []
        self.anchor: int | None = None
        self.branches: list[tuple[int, int]] = []
        self.rings: dict[int, tuple[int, BondOrder | None, int]] = {}
        self.pending_bond: tuple[BondOrder, int] | None = None
        self.bonded: set[tuple[int, int]] = set()

    def error(self, message: str, position: int) -> SmilesParseError:
        return SmilesParseError(message, smiles=self.smiles, position=position)

    def parse(self) -> MoleculeGraph:
        s = self.smiles
        if not s:
            raise self.error("empty SMILES", 0)
        pos = 0
        while pos < len(s):
            char = s[pos]
            if char == "[":
                pos = self.bracket_atom(pos)
                continue
            if s.startswith(_TWO_LETTER, pos):
                self.add_atom(s[pos : pos + 2], False, None, pos)
                pos += 2
                continue
            if char in VALENCES and char != "H":
                self.add_atom(char, False, None, pos)
            elif char in AROMATIC:
                self.add_atom(char.upper(), True, None, pos)
            elif char in _BOND_SYMBOLS:
                if self.anchor is None or self.pending_bond is not None:
                    raise self.error(f"misplaced bond {char!r}", pos)
                self.pending_bond = (_BOND_SYMBOLS[char], pos)
            elif char == "(":
                if self.anchor is None or self.pending_bond is not None:
                    raise self.error("branch without a preceding atom", pos)
                self.branches.append((self.anchor, pos))
            elif char == ")":
                if not self.branches:
                    raise self.error("unmatched ')'", pos)
                if self.pending_bond is not None or s[pos - 1] == "(":
                    raise self.error("empty branch", pos)
                self.anchor, _ = self.branches.pop()
            elif char.isdigit() or char == "%":
                pos = self.ring_closure(pos)
                continue
            elif char == ".":
                if self.anchor is None or self.pending_bond is not None or self.branches:
                    raise self.error("misplaced '.'", pos)
                self.anchor = None
            else:
                raise self.error(f"unsupported character {char!r}", pos)
            pos += 1
        return self.finish()

    def bracket_atom(self, pos: int) -> int:
        end = self.smiles.find("]", pos)
        if end < 0:
            raise self.error("unclosed bracket atom", pos)
        match = _BRACKET.match(self.smiles[pos + 1 : end])
        if match is None:
            raise self.error(f"unsupported bracket atom {self.smiles[pos : end + 1]!r}", pos)
        symbol = match["element"]
        aromatic = symbol in AROMATIC
        element = symbol.upper() if aromatic else symbol
        if element not in VALENCES:
            raise self.error(f"unsupported element {symbol!r}", pos + 1)
        explicit_h = int(match["hcount"] or 1) if match["h"] else 0
        if element == "H" and explicit_h:
            raise self.error("a hydrogen atom cannot carry hydrogens", pos)
        self.add_atom(element, aromatic, explicit_h, pos)
        return end + 1

    def ring_closure(self, pos: int) -> int:
        s = self.smiles
        if s[pos] == "%":
            digits = s[pos + 1 : pos + 3]
            if len(digits) != 2 or not digits.isdigit():
                raise self.error("'%' needs two digits", pos)
            label, after = int(digits), pos + 3
        else:
            label, after = int(s[pos]), pos + 1
        if self.anchor is None:
            raise self.error(f"ring bond {label} before any atom", pos)
        order = self.take_bond()
        if label not in self.rings:
            self.rings[label] = (self.anchor, order, pos)
            return after
        other, opened_order, _ = self.rings.pop(label)
        if order is not None and opened_order is not None and order != opened_order:
            raise self.error(f"conflicting bond orders on ring bond {label}", pos)
        if other == self.anchor:
            raise self.error(f"ring bond {label} joins an atom to itself", pos)
        self.bond(other, self.anchor, order or opened_order, pos)
        return after

    def take_bond(self) -> BondOrder | None:
        if self.pending_bond is None:
            return None
        order, _ = self.pending_bond
        self.pending_bond = None
        return order

    def add_atom(self, element: str, aromatic: bool, bracket_h: int | None, pos: int) -> None:
        index = len(self.atoms)
        self.atoms.append(_PendingAtom(element, aromatic, bracket_h, pos))
        if self.anchor is not None:
            self.bond(self.anchor, index, self.take_bond(), pos)
        self.anchor = index

    def bond(self, a: int, b: int, order: BondOrder | None, pos: int) -> None:
        key = (min(a, b), max(a, b))
        if key in self.bonded:
            raise self.error(f"atoms {a} and {b} are bonded twice", pos)
        if order is None:
            both_aromatic = self.atoms[a].aromatic and self.atoms[b].aromatic
            order = BondOrder.AROMATIC if both_aromatic else BondOrder.SINGLE
        self.bonded.add(key)
        self.bonds.append(Bond(key[0], key[1], order))

    def finish(self) -> MoleculeGraph:
        if self.pending_bond is not None:
            raise self.error("bond symbol without a following atom", self.pending_bond[1])
        if self.branches:
            raise self.error("unclosed branch", self.branches[-1][1])
        if self.rings:
            _, _, pos = min(self.rings.values(), key=lambda r: r[2])
            raise self.error("unclosed ring bond", pos)

        used = [0] * len(self.atoms)
        for bond in self.bonds:
            used[bond.i] += bond.order.valence
            used[bond.j] += bond.order.valence
        in_ring = _ring_atoms(len(self.atoms), self.bonds)
        atoms = []
        for index, pending in enumerate(self.atoms):
            if pending.aromatic and index not in in_ring:
                raise self.error("aromatic atom outside a ring", pending.position)
            atoms.append(
                Atom(
                    pending.element,
                    pending.aromatic,
                    self.hydrogens(pending, used[index]),
                    index in in_ring,
                    pending.position,
                )
            )
        return MoleculeGraph(self.smiles, tuple(atoms), tuple(self.bonds))

    def hydrogens(self, atom: _PendingAtom, used: int) -> int:
        valences = VALENCES[atom.element]
        if atom.bracket_h is not None:
            if used + atom.bracket_h > max(valences):
                raise self.error(f"valence of {atom.element} exceeded", atom.position)
            return atom.bracket_h
        if used > max(valences):
            raise self.error(f"valence of {atom.element} exceeded", atom.position)
        target = next(v for v in valences if v >= used)
        return max(target - used - (1 if atom.aromatic else 0), 0)


def parse_smiles(smiles: str) -> MoleculeGraph:
    """
    Parse one SMILES string.

    Raises:
        SmilesParseError: On malformed input, unsupported features or a
            valence violation, naming the character position

    Examples:
        >>> [a.hydrogens for a in parse_smiles("C").atoms]
        [4]
        >>> parse_smiles("C1CC1").ring_count
        1
        >>> parse_smiles("C(")
        Traceback (most recent call last):
        ...
        atomkit.core.errors.SmilesParseError: unclosed branch at position 1 in 'C('
    """
    return _Parser(smiles.strip()).parse()

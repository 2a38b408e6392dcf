"""
Structural screening rules for candidate molecules.

Criteria are numbered as in the selection protocol: 1 is a valid SMILES
(enforced by the parser), 2-6 are checked here, 7 and 8 are the
similarity windows applied by :func:`~atomkit.curation.selection.select_candidates`.
"""

from __future__ import annotations

from dataclasses import dataclass

from .smiles import MoleculeGraph

ALLOWED_ELEMENTS = ("C", "H", "O", "N")
MAX_OXYGEN = 5
MAX_NITROGEN = 3


@dataclass(frozen=True)
class CriteriaResult:
    """
    Outcome of :func:`check_criteria`.

    Attributes:
        passed: All criteria hold
        criterion: Number of the first violated criterion, None on success
        reason: Human-readable explanation
    """

    passed: bool
    criterion: int | None = None
    reason: str = ""

    def __bool__(self) -> bool:
        return self.passed


def check_criteria(
    candidate: MoleculeGraph,
    seed: MoleculeGraph,
    *,
    elements: tuple[str, ...] = ALLOWED_ELEMENTS,
    max_oxygen: int = MAX_OXYGEN,
    max_nitrogen: int = MAX_NITROGEN,
    require_connected: bool = True,
) -> CriteriaResult:
    """
    Apply criteria 2-6 to ``candidate`` relative to ``seed``.

    2. no more heavy atoms than the seed
    3. only allowed elements
    4. at most ``max_oxygen`` oxygens
    5. at most ``max_nitrogen`` nitrogens
    6. a single connected fragment

    Examples:
        >>> from atomkit.curation.smiles import parse_smiles
        >>> check_criteria(parse_smiles("C.C"), parse_smiles("CCC")).criterion
        6
        >>> bool(check_criteria(parse_smiles("CCO"), parse_smiles("CCO")))
        True
    """
    if candidate.n_heavy_atoms > seed.n_heavy_atoms:
        return CriteriaResult(
            False,
            2,
            f"{candidate.n_heavy_atoms} heavy atoms, seed has {seed.n_heavy_atoms}",
        )
    counts = candidate.element_counts()
    foreign = sorted(set(counts) - set(elements))
    if foreign:
        return CriteriaResult(False, 3, f"element(s) {', '.join(foreign)} not allowed")
    if counts["O"] > max_oxygen:
        return CriteriaResult(False, 4, f"{counts['O']} oxygens, at most {max_oxygen} allowed")
    if counts["N"] > max_nitrogen:
        return CriteriaResult(False, 5, f"{counts['N']} nitrogens, at most {max_nitrogen} allowed")
    if require_connected and not candidate.is_connected():
        return CriteriaResult(False, 6, f"{len(candidate.components)} disconnected fragments")
    return CriteriaResult(True)

"""Candidate curation: SMILES parsing, circular fingerprints, screening criteria, selection."""

from __future__ import annotations

from .criteria import ALLOWED_ELEMENTS, CriteriaResult, check_criteria
from .fingerprint import Fingerprint, fnv1a_64, morgan_fingerprint, tanimoto
from .selection import (
    Acceptance,
    PoolEntry,
    Rejection,
    SelectionConfig,
    SelectionResult,
    read_smiles_file,
    select_candidates,
    write_rejection_log,
    write_selection_csv,
)
from .smiles import Atom, Bond, BondOrder, MoleculeGraph, parse_smiles

__all__ = [
    "ALLOWED_ELEMENTS",
    "Acceptance",
    "Atom",
    "Bond",
    "BondOrder",
    "CriteriaResult",
    "Fingerprint",
    "MoleculeGraph",
    "PoolEntry",
    "Rejection",
    "SelectionConfig",
    "SelectionResult",
    "check_criteria",
    "fnv1a_64",
    "morgan_fingerprint",
    "parse_smiles",
    "read_smiles_file",
    "select_candidates",
    "tanimoto",
    "write_rejection_log",
    "write_selection_csv",
]

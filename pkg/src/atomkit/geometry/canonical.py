"""
Canonical pose for exact SE(3)-equivariance.

The state is centred, rotated onto the eigenvectors of its position
covariance (largest variance first) and the eigenvector signs are fixed with
the angular-momentum pseudovector c0 = sum_i (x_i - mu) x v_i, falling back
to the third moment along the axis when c0 is orthogonal to it. Any map
applied in the canonical frame and followed by :func:`decanonicalize`
commutes with rigid motions of the input.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike

from ..core.errors import CanonicalizationDegenerate
from .state import FloatArray, MoleculeState

EIGENVALUE_GAP_TOL = 1e-8
SIGN_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class CanonicalFrame:
    """
    Rotation ``Q = [e1, e2, e3]``, centroid ``mu`` and the canonical kinematics.

    ``positions = (x - mu) @ Q`` and ``velocities = v @ Q``.
    """

    rotation: FloatArray
    centroid: FloatArray
    positions: FloatArray
    velocities: FloatArray

    @classmethod
    def identity(cls, state: MoleculeState) -> CanonicalFrame:
        """The trivial frame (Q = I, mu = 0), used as the quasi-equivariant fallback."""
        return cls(np.eye(3), np.zeros(3), state.positions.copy(), state.velocities.copy())


def _fix_sign(axis: FloatArray, chirality: FloatArray, centred: FloatArray, label: str) -> FloatArray:
    projection = float(axis @ chirality)
    if abs(projection) > SIGN_TOL:
        return axis if projection > 0 else -axis
    skew = float(np.sum((centred @ axis) ** 3))
    if abs(skew) > SIGN_TOL:
        return axis if skew > 0 else -axis
    raise CanonicalizationDegenerate(f"sign of {label} is undetermined (c0 and third moment vanish)")


def canonicalize(state: MoleculeState) -> CanonicalFrame:
    """
    Remove translation and rotation from ``state``.

    Args:
        state: Molecule snapshot with at least three atoms

    Returns:
        The canonical frame

    Raises:
        CanonicalizationDegenerate: Fewer than three atoms, covariance
            eigenvalues closer than 1e-8, or a vanishing chirality vector
    """
    if state.n_atoms < 3:
        raise CanonicalizationDegenerate(f"need at least 3 atoms, got {state.n_atoms}")
    mu = state.positions.mean(axis=0)
    centred = state.positions - mu
    covariance = centred.T @ centred / state.n_atoms

    eigenvalues, eigenvectors = np.linalg.eigh(covariance)
    eigenvalues = eigenvalues[::-1]
    eigenvectors = eigenvectors[:, ::-1]
    gaps = -np.diff(eigenvalues)
    if np.any(gaps <= EIGENVALUE_GAP_TOL):
        raise CanonicalizationDegenerate(f"repeated covariance eigenvalues {eigenvalues.tolist()}")

    chirality = np.cross(centred, state.velocities).sum(axis=0)
    if np.linalg.norm(chirality) <= SIGN_TOL:
        raise CanonicalizationDegenerate("chirality pseudovector c0 vanishes")

    e1 = _fix_sign(eigenvectors[:, 0], chirality, centred, "e1")
    e2 = eigenvectors[:, 1] - (eigenvectors[:, 1] @ e1) * e1
    e2 = _fix_sign(e2 / np.linalg.norm(e2), chirality, centred, "e2")
    e3 = np.cross(e1, e2)
    q = np.column_stack([e1, e2, e3])

    return CanonicalFrame(
        rotation=q,
        centroid=mu,
        positions=centred @ q,
        velocities=state.velocities @ q,
    )


def decanonicalize(y: ArrayLike, frame: CanonicalFrame) -> FloatArray:
    """
    Map canonical coordinates back: ``y @ Q.T + mu``.

    Works on any array whose last axis has length 3.

    Examples:
        >>> s = MoleculeState.from_arrays(np.eye(3), np.zeros((3, 3)), [1, 1, 1])
        >>> decanonicalize(np.zeros((2, 3)), CanonicalFrame.identity(s)).tolist()
        [[0.0, 0.0, 0.0], [0.0, 0.0, 0.0]]
    """
    return np.asarray(y, dtype=np.float64) @ frame.rotation.T + frame.centroid

"""Uniformly distributed proper rotations."""

from __future__ import annotations

import numpy as np

from .state import FloatArray


def quaternion_to_matrix(q: FloatArray) -> FloatArray:
    """Rotation matrix of a unit quaternion (w, x, y, z)."""
    w, x, y, z = q / np.linalg.norm(q)
    return np.array(
        [
            [1 - 2 * (y * y + z * z), 2 * (x * y - z * w), 2 * (x * z + y * w)],
            [2 * (x * y + z * w), 1 - 2 * (x * x + z * z), 2 * (y * z - x * w)],
            [2 * (x * z - y * w), 2 * (y * z + x * w), 1 - 2 * (x * x + y * y)],
        ]
    )


def random_rotation(seed: int | np.random.Generator) -> FloatArray:
    """
    Haar-uniform element of SO(3).

    A normalised 4-d Gaussian is a uniform unit quaternion, and unit
    quaternions cover SO(3) uniformly.

    Args:
        seed: Integer seed or an existing generator

    Returns:
        A 3 x 3 orthogonal matrix with determinant +1

    Examples:
        >>> r = random_rotation(0)
        >>> bool(np.allclose(r.T @ r, np.eye(3)))
        True
    """
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    return quaternion_to_matrix(rng.standard_normal(4))

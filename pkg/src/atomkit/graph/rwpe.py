"""
Random-walk positional encodings.

With transition matrix ``M = D^-1 A`` the encoding of node i is the vector of
self-return probabilities ``(M^k)_ii`` for walk lengths k = 1..K, stored at
column k - 1. A node without neighbours gets a zero row of M, so all of its
return probabilities are zero.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..autodiff import Tensor
from ..core.errors import ConfigurationError, ContractError, ShapeError
from ..geometry.lifting import LiftedEmbedding
from ..geometry.state import FloatArray
from .radius import RadiusGraph

DEFAULT_WALK_LENGTH = 8


@dataclass(frozen=True, eq=False)
class RwpeMatrix:
    """
    ``values[..., i, k]`` is the probability that a walk from i is back at i
    after k + 1 steps. A leading batch axis holds one encoding per sample.
    """

    values: FloatArray

    @classmethod
    def stack(cls, encodings: list[RwpeMatrix]) -> RwpeMatrix:
        """Batch encodings of equally sized graphs along a new leading axis."""
        return cls(np.stack([e.values for e in encodings]))

    @property
    def n_nodes(self) -> int:
        """Number of rows N."""
        return int(self.values.shape[-2])

    @property
    def walk_length(self) -> int:
        """Number of columns K."""
        return int(self.values.shape[-1])


def transition_matrix(graph: RadiusGraph) -> FloatArray:
    """Row-normalised adjacency ``D^-1 A`` with zero rows for isolated nodes."""
    a = graph.adjacency()
    degrees = a.sum(axis=1, keepdims=True)
    return np.divide(a, degrees, out=np.zeros_like(a), where=degrees > 0)


def rwpe(graph: RadiusGraph, walk_length: int = DEFAULT_WALK_LENGTH) -> RwpeMatrix:
    """
    Self-return probabilities for walks of length 1..K.

    Args:
        graph: Neighbourhood graph
        walk_length: K >= 1

    Returns:
        The N x K encoding

    Raises:
        ContractError: If ``walk_length`` < 1

    Examples:
        >>> from .radius import radius_graph
        >>> rwpe(radius_graph([[0, 0, 0], [1.0, 0, 0]]), 2).values.tolist()
        [[0.0, 1.0], [0.0, 1.0]]
    """
    if walk_length < 1:
        raise ContractError(f"walk length must be >= 1, got {walk_length}")
    m = transition_matrix(graph)
    power = np.eye(graph.n_nodes)
    columns = []
    for _ in range(walk_length):
        power = power @ m
        columns.append(np.diagonal(power).copy())
    values = np.stack(columns, axis=1)
    return RwpeMatrix(np.clip(values, 0.0, 1.0))


def attach_rwpe(embedding: LiftedEmbedding, encoding: RwpeMatrix) -> LiftedEmbedding:
    """
    Write the encoding into the reserved scalar channels of Z.

    Every timestep copy of atom i receives row i, following the atom-major
    row layout. The reserved channels are zero after lifting, so adding the
    padded encoding writes it without touching any other channel.

    Raises:
        ConfigurationError: If K differs from the number of reserved channels
        ShapeError: If the encoding has the wrong number of atoms
    """
    reserved = embedding.layout.n_reserved
    if encoding.walk_length != reserved:
        raise ConfigurationError(
            f"RWPE length {encoding.walk_length} does not match {reserved} reserved channels"
        )
    if encoding.n_nodes != embedding.n_atoms:
        raise ShapeError(f"RWPE has {encoding.n_nodes} rows for {embedding.n_atoms} atoms")
    pad = np.zeros(np.broadcast_shapes(embedding.z.shape, encoding.values.shape[:-2] + (1, 1)))
    pad[..., embedding.layout.reserved_slice] = np.tile(encoding.values, (embedding.n_steps, 1))
    return embedding.with_z(embedding.z + Tensor(pad))

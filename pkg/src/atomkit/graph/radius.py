"""Epsilon-neighbourhood graphs over atomic positions."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike

from ..core.errors import ContractError, ShapeError
from ..geometry.state import FloatArray

DEFAULT_EPSILON = 1.6


@dataclass(frozen=True)
class RadiusGraph:
    """
    Undirected graph with an edge (i, j), i < j, iff |x_i - x_j| < epsilon.

    Edges are stored once, sorted lexicographically.
    """

    n_nodes: int
    edges: tuple[tuple[int, int], ...]
    epsilon: float

    def adjacency(self) -> FloatArray:
        """Symmetric 0/1 adjacency matrix with an empty diagonal."""
        a = np.zeros((self.n_nodes, self.n_nodes))
        for i, j in self.edges:
            a[i, j] = a[j, i] = 1.0
        return a

    def degrees(self) -> FloatArray:
        """Number of neighbours per node."""
        return self.adjacency().sum(axis=1)

    def is_connected(self) -> bool:
        """True when every node is reachable from node 0."""
        if self.n_nodes <= 1:
            return True
        a = self.adjacency()
        seen = {0}
        frontier = [0]
        while frontier:
            node = frontier.pop()
            for nxt in np.flatnonzero(a[node]):
                if int(nxt) not in seen:
                    seen.add(int(nxt))
                    frontier.append(int(nxt))
        return len(seen) == self.n_nodes


def radius_graph(positions: ArrayLike, epsilon: float = DEFAULT_EPSILON) -> RadiusGraph:
    """
    Connect every pair of atoms closer than ``epsilon`` (strict inequality).

    Args:
        positions: N x 3 coordinates
        epsilon: Cut-off distance, default 1.6

    Returns:
        The neighbourhood graph

    Raises:
        ContractError: If ``epsilon`` is not positive
        ShapeError: If ``positions`` is not N x 3

    Examples:
        >>> radius_graph([[0, 0, 0], [1.0, 0, 0]], 1.6).edges
        ((0, 1),)
        >>> radius_graph([[0, 0, 0], [2.0, 0, 0]], 1.6).edges
        ()
    """
    if epsilon <= 0.0:
        raise ContractError(f"epsilon must be > 0, got {epsilon}")
    x = np.asarray(positions, dtype=np.float64)
    if x.ndim != 2 or x.shape[1] != 3:
        raise ShapeError(f"positions must be N x 3, got {x.shape}")
    distances = np.linalg.norm(x[:, None, :] - x[None, :, :], axis=-1)
    rows, cols = np.nonzero(np.triu(distances < epsilon, k=1))
    edges = tuple((int(i), int(j)) for i, j in zip(rows, cols, strict=True))
    return RadiusGraph(n_nodes=x.shape[0], edges=edges, epsilon=float(epsilon))

"""
Lifting of positions, velocities and atomic numbers into channel space.

Every lifted stream (X, V, Z) has width ``d_v`` and is laid out as

* ``3 * C`` vector channels: C triples, each a learned multiple of a raw
  3-vector, so they rotate with the input;
* ``d_v - 3 * C`` scalar channels built from norms and the atomic-number
  embedding, so they are rotation invariant. In Z the last ``reserved``
  scalar channels are left at zero for random-walk encodings.

Rows are ordered atom-major within timestep blocks: row ``p * N + i`` holds
atom ``i`` at query timestep ``p``.
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import ClassVar

import numpy as np
from numpy.typing import ArrayLike

from ..autodiff import Tensor, concat, parameter
from ..core.errors import ConfigurationError, ContractError, ShapeError
from .state import FloatArray, MoleculeState

ATOMIC_EMBED_DIM = 16
MAX_ATOMIC_NUMBER = 118


def augment_with_norm(vec: ArrayLike) -> FloatArray:
    """
    Append the Euclidean norm to the last axis: (x, y, z) -> (x, y, z, |v|).

    Examples:
        >>> augment_with_norm([3.0, 4.0, 0.0]).tolist()
        [3.0, 4.0, 0.0, 5.0]
    """
    a = np.asarray(vec, dtype=np.float64)
    if a.shape[-1] != 3:
        raise ShapeError(f"expected 3-vectors on the last axis, got shape {a.shape}")
    return np.concatenate([a, np.linalg.norm(a, axis=-1, keepdims=True)], axis=-1)


@dataclass(frozen=True)
class ChannelLayout:
    """
    Split of the embedding width into vector, scalar and reserved channels.

    Examples:
        >>> layout = ChannelLayout.for_width(32, reserved=8)
        >>> layout.n_vectors, layout.n_scalars, layout.n_free_scalars
        (5, 17, 9)
    """

    d_v: int
    n_vectors: int
    n_reserved: int = 0

    @classmethod
    def for_width(cls, d_v: int, reserved: int = 0) -> ChannelLayout:
        """
        Half the width, rounded down to whole triples, carries vectors.

        Raises:
            ConfigurationError: If no vector triple or no free scalar channel fits
        """
        n_vectors = (d_v // 2) // 3
        if n_vectors < 1:
            raise ConfigurationError(f"d_v={d_v} leaves no room for a vector triple")
        if reserved < 0:
            raise ConfigurationError(f"reserved channels must be >= 0, got {reserved}")
        if d_v - 3 * n_vectors - reserved < 1:
            raise ConfigurationError(
                f"d_v={d_v} leaves no free scalar channel after {reserved} reserved ones"
            )
        return cls(d_v=d_v, n_vectors=n_vectors, n_reserved=reserved)

    @property
    def vector_width(self) -> int:
        """Number of vector channels (3 per triple)."""
        return 3 * self.n_vectors

    @property
    def n_scalars(self) -> int:
        """Scalar channels, reserved ones included."""
        return self.d_v - self.vector_width

    @property
    def n_free_scalars(self) -> int:
        """Scalar channels the lift writes."""
        return self.n_scalars - self.n_reserved

    @property
    def vector_slice(self) -> slice:
        """Channel range of the vector triples (component k of triple c at 3c + k)."""
        return slice(0, self.vector_width)

    @property
    def scalar_slice(self) -> slice:
        """Channel range of all scalar channels."""
        return slice(self.vector_width, self.d_v)

    @property
    def reserved_slice(self) -> slice:
        """Channel range left for random-walk encodings in Z."""
        return slice(self.d_v - self.n_reserved, self.d_v)


@dataclass(frozen=True, eq=False)
class LiftedEmbedding:
    """
    Position, velocity and phase features, each ``(..., N * P, d_v)``.

    A leading batch axis is allowed; all three streams share one shape.
    """

    x: Tensor
    v: Tensor
    z: Tensor
    layout: ChannelLayout
    n_atoms: int
    n_steps: int

    def __post_init__(self) -> None:
        """Check that the three streams agree with the layout."""
        if not self.x.shape == self.v.shape == self.z.shape:
            raise ShapeError(f"stream shapes differ: {self.x.shape}, {self.v.shape}, {self.z.shape}")
        if self.z.shape[-1] != self.layout.d_v:
            raise ShapeError(f"stream width {self.z.shape[-1]} != d_v {self.layout.d_v}")
        if self.z.shape[-2] != self.n_atoms * self.n_steps:
            raise ShapeError(
                f"{self.z.shape[-2]} rows do not match {self.n_atoms} atoms x {self.n_steps} steps"
            )

    @property
    def d_v(self) -> int:
        """Embedding width."""
        return self.layout.d_v

    def with_z(self, z: Tensor) -> LiftedEmbedding:
        """Same X and V, new phase features."""
        return LiftedEmbedding(self.x, self.v, z, self.layout, self.n_atoms, self.n_steps)


def _check_block(positions: FloatArray, velocities: FloatArray, atomic_numbers: ArrayLike) -> None:
    if positions.ndim != 4 or positions.shape[-1] != 3:
        raise ShapeError(f"expected a (B, P, N, 3) block, got {positions.shape}")
    if velocities.shape != positions.shape:
        raise ShapeError(f"velocity block {velocities.shape} != position block {positions.shape}")
    numbers = np.asarray(atomic_numbers)
    if numbers.shape != (positions.shape[2],):
        raise ShapeError(f"atomic numbers {numbers.shape} do not match {positions.shape[2]} atoms")
    if np.any(numbers < 1) or np.any(numbers > MAX_ATOMIC_NUMBER):
        raise ContractError(f"atomic numbers must lie in [1, {MAX_ATOMIC_NUMBER}]")


def _glorot(rng: np.random.Generator, fan_in: int, fan_out: int) -> FloatArray:
    return rng.normal(0.0, 1.0 / np.sqrt(fan_in), size=(fan_in, fan_out))


class Lift(ABC):
    """
    Learned map from a duplicated frame block to a :class:`LiftedEmbedding`.

    Subclasses register under a short name used by the model configuration.
    """

    _registry: ClassVar[dict[str, type[Lift]]] = {}
    kind: ClassVar[str]

    def __init_subclass__(cls, *, name: str, **kwargs: object) -> None:
        """Register the subclass under ``name``."""
        super().__init_subclass__(**kwargs)
        cls.kind = name
        Lift._registry[name] = cls

    @classmethod
    def create(cls, name: str, layout: ChannelLayout, rng: np.random.Generator) -> Lift:
        """
        Instantiate a registered lift.

        Raises:
            ConfigurationError: For an unknown name
        """
        lift_class = cls._registry.get(name)
        if lift_class is None:
            raise ConfigurationError(f"unknown lifting {name!r}; choose from {sorted(cls._registry)}")
        return lift_class(layout, rng)

    @classmethod
    def available(cls) -> list[str]:
        """Registered lift names."""
        return sorted(cls._registry)

    def __init__(self, layout: ChannelLayout, rng: np.random.Generator) -> None:
        """Store the layout and an atomic-number embedding table."""
        self.layout = layout
        self.embedding = parameter(
            rng.normal(0.0, 1.0, size=(MAX_ATOMIC_NUMBER + 1, ATOMIC_EMBED_DIM)), "embedding"
        )

    def parameters(self) -> dict[str, Tensor]:
        """Trainable tensors by attribute name."""
        return {name: value for name, value in vars(self).items() if isinstance(value, Tensor)}

    def __call__(
        self, positions: ArrayLike, velocities: ArrayLike, atomic_numbers: ArrayLike
    ) -> LiftedEmbedding:
        """
        Lift a ``(B, P, N, 3)`` block of positions and velocities.

        Returns:
            Streams of shape ``(B, P * N, d_v)``
        """
        x = np.asarray(positions, dtype=np.float64)
        v = np.asarray(velocities, dtype=np.float64)
        _check_block(x, v, atomic_numbers)
        batch, steps, atoms, _ = x.shape
        embedded = self.embedding[np.asarray(atomic_numbers, dtype=np.int64)]
        streams = self._lift(x, v, embedded)
        rows = (batch, steps * atoms, self.layout.d_v)
        return LiftedEmbedding(
            *(s.reshape(rows) for s in streams),
            layout=self.layout,
            n_atoms=atoms,
            n_steps=steps,
        )

    def _reserve(self, z: Tensor) -> Tensor:
        if not self.layout.n_reserved:
            return z
        zeros = Tensor(np.zeros(z.shape[:-1] + (self.layout.n_reserved,)))
        return concat([z, zeros], axis=-1)

    @abstractmethod
    def _lift(self, x: FloatArray, v: FloatArray, embedded: Tensor) -> tuple[Tensor, Tensor, Tensor]:
        """Return X, V, Z as ``(B, P, N, d_v)`` tensors."""


class EquivariantLift(Lift, name="equivariant"):
    """
    Vector channels are per-triple scalings of x, v (or a mix of both for Z);
    scalar channels read only norms and the atomic-number embedding.
    """

    def __init__(self, layout: ChannelLayout, rng: np.random.Generator) -> None:
        """Draw the channel-mixing weights."""
        super().__init__(layout, rng)
        c, s, f = layout.n_vectors, layout.n_scalars, layout.n_free_scalars
        self.w_x_vec = parameter(rng.normal(0.0, 1.0, size=(c, 1)), "w_x_vec")
        self.w_v_vec = parameter(rng.normal(0.0, 1.0, size=(c, 1)), "w_v_vec")
        self.w_zx_vec = parameter(rng.normal(0.0, 1.0, size=(c, 1)), "w_zx_vec")
        self.w_zv_vec = parameter(rng.normal(0.0, 1.0, size=(c, 1)), "w_zv_vec")
        self.w_x_scalar = parameter(_glorot(rng, 1, s), "w_x_scalar")
        self.b_x_scalar = parameter(np.zeros(s), "b_x_scalar")
        self.w_v_scalar = parameter(_glorot(rng, 1, s), "w_v_scalar")
        self.b_v_scalar = parameter(np.zeros(s), "b_v_scalar")
        self.w_z_norms = parameter(_glorot(rng, 2, f), "w_z_norms")
        self.w_z_embed = parameter(_glorot(rng, ATOMIC_EMBED_DIM, f), "w_z_embed")
        self.b_z_scalar = parameter(np.zeros(f), "b_z_scalar")

    def _vectors(self, weight: Tensor, raw: FloatArray) -> Tensor:
        mixed = weight * Tensor(raw[..., None, :])
        return mixed.reshape(raw.shape[:-1] + (self.layout.vector_width,))

    def _lift(self, x: FloatArray, v: FloatArray, embedded: Tensor) -> tuple[Tensor, Tensor, Tensor]:
        x_norm = Tensor(np.linalg.norm(x, axis=-1, keepdims=True))
        v_norm = Tensor(np.linalg.norm(v, axis=-1, keepdims=True))

        lifted_x = concat(
            [self._vectors(self.w_x_vec, x), x_norm @ self.w_x_scalar + self.b_x_scalar], axis=-1
        )
        lifted_v = concat(
            [self._vectors(self.w_v_vec, v), v_norm @ self.w_v_scalar + self.b_v_scalar], axis=-1
        )
        z_vectors = self._vectors(self.w_zx_vec, x) + self._vectors(self.w_zv_vec, v)
        z_scalars = (
            concat([x_norm, v_norm], axis=-1) @ self.w_z_norms
            + embedded @ self.w_z_embed
            + self.b_z_scalar
        )
        lifted_z = self._reserve(concat([z_vectors, z_scalars], axis=-1))
        return lifted_x, lifted_v, lifted_z


class LinearLift(Lift, name="linear"):
    """Plain linear layers over (x, y, z, |.|); not rotation equivariant."""

    def __init__(self, layout: ChannelLayout, rng: np.random.Generator) -> None:
        """Draw dense weights for every stream."""
        super().__init__(layout, rng)
        d, f = layout.d_v, layout.d_v - layout.n_reserved
        self.w_x = parameter(_glorot(rng, 4, d), "w_x")
        self.b_x = parameter(np.zeros(d), "b_x")
        self.w_v = parameter(_glorot(rng, 4, d), "w_v")
        self.b_v = parameter(np.zeros(d), "b_v")
        self.w_z_phase = parameter(_glorot(rng, 8, f), "w_z_phase")
        self.w_z_embed = parameter(_glorot(rng, ATOMIC_EMBED_DIM, f), "w_z_embed")
        self.b_z = parameter(np.zeros(f), "b_z")

    def _lift(self, x: FloatArray, v: FloatArray, embedded: Tensor) -> tuple[Tensor, Tensor, Tensor]:
        ax, av = augment_with_norm(x), augment_with_norm(v)
        lifted_x = Tensor(ax) @ self.w_x + self.b_x
        lifted_v = Tensor(av) @ self.w_v + self.b_v
        phase = Tensor(np.concatenate([ax, av], axis=-1))
        lifted_z = self._reserve(phase @ self.w_z_phase + embedded @ self.w_z_embed + self.b_z)
        return lifted_x, lifted_v, lifted_z


def duplicate_state(state: MoleculeState, n_steps: int) -> tuple[FloatArray, FloatArray]:
    """Broadcast one state to ``(1, P, N, 3)`` position and velocity blocks (read-only views)."""
    if n_steps < 1:
        raise ContractError(f"need at least one timestep, got P={n_steps}")
    shape = (1, n_steps, state.n_atoms, 3)
    return np.broadcast_to(state.positions, shape), np.broadcast_to(state.velocities, shape)


def equivariant_lift(state: MoleculeState, n_steps: int, lift: Lift) -> LiftedEmbedding:
    """
    Lift one state, repeated for ``n_steps`` query timesteps.

    Args:
        state: Input snapshot
        n_steps: Number of query timesteps P
        lift: Learned lifting (usually :class:`EquivariantLift`)

    Returns:
        Streams of shape ``(N * P, d_v)``

    Examples:
        >>> rng = np.random.default_rng(0)
        >>> lift = Lift.create("equivariant", ChannelLayout.for_width(12), rng)
        >>> s = MoleculeState.from_arrays(np.ones((2, 3)), np.zeros((2, 3)), [1, 8])
        >>> equivariant_lift(s, 3, lift).z.shape
        (6, 12)
    """
    positions, velocities = duplicate_state(state, n_steps)
    batched = lift(positions, velocities, state.atomic_numbers)
    return LiftedEmbedding(
        batched.x[0], batched.v[0], batched.z[0], batched.layout, batched.n_atoms, batched.n_steps
    )

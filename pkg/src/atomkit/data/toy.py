"""
Synthetic molecular dynamics for desk-scale experiments.

Atoms sit on a random chain with bond length 1.4 and move under either a
tether to that geometry (``"harmonic"``) or springs between every pair
closer than 2.6 in the reference geometry (``"pairwise-spring"``). Natural
units throughout: unit masses, unit spring constants.
"""

from __future__ import annotations

import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Any, ClassVar

import numpy as np
from numpy.typing import ArrayLike

from ..core.errors import ConfigurationError, ContractError
from ..geometry.state import FloatArray, IntArray
from .trajectory import Trajectory

logger = logging.getLogger(__name__)

BOND_LENGTH = 1.4
SPRING_CUTOFF = 2.6
TOY_ELEMENTS = (1, 6, 7, 8)


class Potential(ABC):
    """Conservative force field around a reference geometry."""

    _registry: ClassVar[dict[str, type[Potential]]] = {}
    kind: ClassVar[str]

    def __init_subclass__(cls, *, name: str, **kwargs: object) -> None:
        """Register the subclass under ``name``."""
        super().__init_subclass__(**kwargs)
        cls.kind = name
        Potential._registry[name] = cls

    def __init__(self, reference: ArrayLike, stiffness: float = 1.0) -> None:
        """Anchor the potential at ``reference`` (N x 3)."""
        if stiffness <= 0.0:
            raise ConfigurationError(f"stiffness must be > 0, got {stiffness}")
        self.reference = np.array(reference, dtype=np.float64)
        self.stiffness = float(stiffness)

    @classmethod
    def create(cls, name: str, reference: ArrayLike, **kwargs: Any) -> Potential:
        """
        Instantiate a registered potential.

        Raises:
            ConfigurationError: For an unknown name
        """
        potential_class = cls._registry.get(name)
        if potential_class is None:
            raise ConfigurationError(f"unknown potential {name!r}; choose from {cls.available()}")
        return potential_class(reference, **kwargs)

    @classmethod
    def available(cls) -> list[str]:
        """Registered potential names."""
        return sorted(cls._registry)

    @abstractmethod
    def energy(self, positions: FloatArray) -> float:
        """Potential energy."""

    @abstractmethod
    def forces(self, positions: FloatArray) -> FloatArray:
        """Negative gradient of :meth:`energy`."""


class HarmonicPotential(Potential, name="harmonic"):
    """Every atom tethered to its reference position: E = k/2 sum |x - x_ref|^2."""

    def energy(self, positions: FloatArray) -> float:
        """Potential energy."""
        d = positions - self.reference
        return 0.5 * self.stiffness * float(np.sum(d * d))

    def forces(self, positions: FloatArray) -> FloatArray:
        """Restoring forces."""
        return -self.stiffness * (positions - self.reference)


class PairwiseSpringPotential(Potential, name="pairwise-spring"):
    """
    Springs of rest length r0_ij between every pair closer than the cut-off
    in the reference geometry: E = k/2 sum (|x_i - x_j| - r0_ij)^2.

    Only internal coordinates enter, so momentum is conserved.
    """

    def __init__(self, reference: ArrayLike, stiffness: float = 1.0, cutoff: float = SPRING_CUTOFF) -> None:
        """Pick the spring network from the reference geometry."""
        super().__init__(reference, stiffness)
        ref = self.reference
        distances = np.linalg.norm(ref[:, None] - ref[None, :], axis=-1)
        i, j = np.nonzero(np.triu(distances < cutoff, k=1))
        self.pairs = np.stack([i, j], axis=1)
        self.rest_lengths = distances[i, j]

    def _stretch(self, positions: FloatArray) -> tuple[FloatArray, FloatArray, FloatArray]:
        i, j = self.pairs[:, 0], self.pairs[:, 1]
        delta = positions[i] - positions[j]
        length = np.linalg.norm(delta, axis=-1)
        return delta, length, length - self.rest_lengths

    def energy(self, positions: FloatArray) -> float:
        """Potential energy."""
        _, _, stretch = self._stretch(positions)
        return 0.5 * self.stiffness * float(np.sum(stretch * stretch))

    def forces(self, positions: FloatArray) -> FloatArray:
        """Spring forces, equal and opposite per pair."""
        delta, length, stretch = self._stretch(positions)
        pull = (-self.stiffness * stretch / np.maximum(length, 1e-12))[:, None] * delta
        forces = np.zeros_like(positions)
        np.add.at(forces, self.pairs[:, 0], pull)
        np.add.at(forces, self.pairs[:, 1], -pull)
        return forces


def total_energy(potential: Potential, positions: FloatArray, velocities: FloatArray) -> float:
    """Kinetic (unit masses) plus potential energy."""
    return 0.5 * float(np.sum(velocities * velocities)) + potential.energy(positions)


class VelocityVerlet:
    """
    Velocity-Verlet integrator with unit masses.

    Examples:
        >>> pot = Potential.create("harmonic", np.zeros((1, 3)))
        >>> x, v = VelocityVerlet(pot, 0.01).run(np.array([[1.0, 0, 0]]), np.zeros((1, 3)), 3)
        >>> x.shape
        (3, 1, 3)
    """

    def __init__(self, potential: Potential, dt: float) -> None:
        """Bind a force field and a timestep."""
        if not dt > 0.0:
            raise ContractError(f"timestep must be > 0, got {dt}")
        self.potential = potential
        self.dt = float(dt)

    def step(
        self, positions: FloatArray, velocities: FloatArray, forces: FloatArray
    ) -> tuple[FloatArray, FloatArray, FloatArray]:
        """Advance one timestep; returns new positions, velocities and forces."""
        half = velocities + 0.5 * self.dt * forces
        new_positions = positions + self.dt * half
        new_forces = self.potential.forces(new_positions)
        return new_positions, half + 0.5 * self.dt * new_forces, new_forces

    def run(
        self,
        positions: FloatArray,
        velocities: FloatArray,
        n_frames: int,
        record_every: int = 1,
    ) -> tuple[FloatArray, FloatArray]:
        """
        Integrate and record ``n_frames`` frames, the first being the initial state.

        Returns:
            ``(n_frames, N, 3)`` positions and velocities
        """
        if n_frames < 1 or record_every < 1:
            raise ContractError("n_frames and record_every must be >= 1")
        x = np.array(positions, dtype=np.float64)
        v = np.array(velocities, dtype=np.float64)
        f = self.potential.forces(x)
        xs = np.empty((n_frames,) + x.shape)
        vs = np.empty((n_frames,) + x.shape)
        xs[0], vs[0] = x, v
        for frame in range(1, n_frames):
            for _ in range(record_every):
                x, v, f = self.step(x, v, f)
            xs[frame], vs[frame] = x, v
        return xs, vs


def random_chain(n_atoms: int, rng: np.random.Generator, bond_length: float = BOND_LENGTH) -> FloatArray:
    """Self-avoiding-ish random walk of ``n_atoms`` points, centred at the origin."""
    steps = rng.standard_normal((n_atoms - 1, 3))
    steps *= bond_length / np.linalg.norm(steps, axis=1, keepdims=True)
    chain = np.vstack([np.zeros((1, 3)), np.cumsum(steps, axis=0)])
    return chain - chain.mean(axis=0)


@dataclass(frozen=True)
class ToySystem:
    """Potential and initial conditions of a toy molecule."""

    potential: Potential
    positions: FloatArray
    velocities: FloatArray
    atomic_numbers: IntArray


def make_toy_system(
    potential: str,
    n_atoms: int,
    seed: int | np.random.Generator,
    *,
    displacement_scale: float = 0.1,
    velocity_scale: float = 0.5,
    stiffness: float = 1.0,
) -> ToySystem:
    """
    Random reference chain, element labels and perturbed initial conditions.

    With both scales at zero the system starts at rest in equilibrium.
    """
    if n_atoms < 1:
        raise ContractError(f"need at least one atom, got {n_atoms}")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    reference = random_chain(n_atoms, rng)
    numbers = rng.choice(TOY_ELEMENTS, size=n_atoms)
    field = Potential.create(potential, reference, stiffness=stiffness)
    positions = reference + displacement_scale * rng.standard_normal(reference.shape)
    velocities = velocity_scale * rng.standard_normal(reference.shape)
    if field.kind == "pairwise-spring":
        velocities -= velocities.mean(axis=0)
    return ToySystem(field, positions, velocities, numbers)


def generate_toy_trajectory(
    potential: str,
    n_atoms: int,
    steps: int,
    dt: float,
    seed: int | np.random.Generator,
    *,
    name: str | None = None,
    record_every: int = 1,
    displacement_scale: float = 0.1,
    velocity_scale: float = 0.5,
    stiffness: float = 1.0,
) -> Trajectory:
    """
    Integrate a toy molecule with velocity Verlet.

    Args:
        potential: ``"harmonic"`` or ``"pairwise-spring"``
        n_atoms: N >= 2
        steps: Number of recorded frames T >= 2
        dt: Integration timestep > 0
        seed: Seed (or generator) for geometry, elements and initial conditions
        name: Trajectory name; defaults to ``toy-<potential>``
        record_every: Integration steps between recorded frames
        displacement_scale: Std of the initial displacement from equilibrium
        velocity_scale: Std of the initial velocities
        stiffness: Spring constant

    Returns:
        A trajectory with ``steps`` frames spaced ``dt * record_every``

    Raises:
        ContractError: If N < 2, steps < 2 or dt <= 0
    """
    if n_atoms < 2 or steps < 2 or not dt > 0.0:
        raise ContractError(f"need N >= 2, steps >= 2, dt > 0; got {n_atoms}, {steps}, {dt}")
    system = make_toy_system(
        potential,
        n_atoms,
        seed,
        displacement_scale=displacement_scale,
        velocity_scale=velocity_scale,
        stiffness=stiffness,
    )
    xs, vs = VelocityVerlet(system.potential, dt).run(
        system.positions, system.velocities, steps, record_every
    )
    label = name or f"toy-{potential}"
    logger.debug("generated %s: %d atoms, %d frames", label, n_atoms, steps)
    return Trajectory(xs, vs, system.atomic_numbers, dt * record_every, label)

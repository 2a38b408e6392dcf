"""Tests for toy dynamics and stability analytics."""

from pathlib import Path

import numpy as np
import pytest

from atomkit.core import ConfigurationError, ContractError
from atomkit.data import (
    Potential,
    Trajectory,
    VelocityVerlet,
    generate_toy_trajectory,
    make_toy_system,
    stability_metrics,
    total_energy,
    write_stability_csv,
)


def test_registry() -> None:
    """Test both potentials are registered."""
    assert Potential.available() == ["harmonic", "pairwise-spring"]
    with pytest.raises(ConfigurationError):
        Potential.create("lennard-jones", np.zeros((2, 3)))
    with pytest.raises(ConfigurationError):
        Potential.create("harmonic", np.zeros((2, 3)), stiffness=0.0)


@pytest.mark.parametrize("name", ["harmonic", "pairwise-spring"])
def test_forces_are_negative_energy_gradients(name: str) -> None:
    """Test forces against central differences of the energy."""
    system = make_toy_system(name, 5, 0)
    x = system.positions
    h = 1e-6
    numeric = np.zeros_like(x)
    for index in np.ndindex(x.shape):
        plus, minus = x.copy(), x.copy()
        plus[index] += h
        minus[index] -= h
        numeric[index] = -(system.potential.energy(plus) - system.potential.energy(minus)) / (2 * h)
    assert np.allclose(system.potential.forces(x), numeric, atol=1e-6)


@pytest.mark.parametrize("name", ["harmonic", "pairwise-spring"])
def test_velocity_verlet_conserves_energy(name: str) -> None:
    """Test the integrator keeps total energy within a small relative band."""
    system = make_toy_system(name, 5, 1)
    xs, vs = VelocityVerlet(system.potential, 0.005).run(system.positions, system.velocities, 2000)
    energies = np.array([total_energy(system.potential, x, v) for x, v in zip(xs, vs, strict=True)])
    assert np.max(np.abs(energies - energies[0])) / abs(energies[0]) < 1e-3


def _oscillator_energy_error(dt: float, n_steps: int) -> float:
    potential = Potential.create("harmonic", np.zeros((1, 3)))
    start = np.array([[1.0, 0.0, 0.0]])
    xs, vs = VelocityVerlet(potential, dt).run(start, np.zeros((1, 3)), n_steps + 1)
    energies = np.array([total_energy(potential, x, v) for x, v in zip(xs, vs, strict=True)])
    return float(np.max(np.abs(energies - energies[0])) / energies[0])


def test_oscillator_energy_drift_over_ten_thousand_steps() -> None:
    """Test one harmonic oscillator keeps its energy to 1e-6 over 1e4 steps at dt 1e-3."""
    assert _oscillator_energy_error(1e-3, 10_000) < 1e-6


def test_energy_error_is_second_order_in_dt() -> None:
    """Test halving dt over the same span cuts the largest energy error by 3 to 5 times."""
    ratio = _oscillator_energy_error(2e-3, 5_000) / _oscillator_energy_error(1e-3, 10_000)
    assert 3.0 <= ratio <= 5.0


def test_equilibrium_at_rest_stays_put() -> None:
    """Test a system at rest in its reference geometry does not move."""
    system = make_toy_system("pairwise-spring", 4, 2, displacement_scale=0.0, velocity_scale=0.0)
    xs, _ = VelocityVerlet(system.potential, 0.05).run(system.positions, system.velocities, 50)
    assert np.allclose(xs, xs[0])


def test_generation_is_deterministic() -> None:
    """Test the same seed reproduces the trajectory bit for bit."""
    a = generate_toy_trajectory("harmonic", 4, 30, 0.05, seed=7)
    b = generate_toy_trajectory("harmonic", 4, 30, 0.05, seed=7)
    c = generate_toy_trajectory("harmonic", 4, 30, 0.05, seed=8)
    assert a.same_frames(b)
    assert not a.same_frames(c)
    assert a.name == "toy-harmonic"


def test_record_every_spaces_frames() -> None:
    """Test recorded frames are record_every integration steps apart."""
    traj = generate_toy_trajectory("harmonic", 3, 10, 0.01, seed=0, record_every=5)
    assert traj.dt == pytest.approx(0.05)
    assert len(traj) == 10


def test_generation_contracts() -> None:
    """Test undersized requests are rejected."""
    with pytest.raises(ContractError):
        generate_toy_trajectory("harmonic", 1, 10, 0.05, seed=0)
    with pytest.raises(ContractError):
        generate_toy_trajectory("harmonic", 3, 1, 0.05, seed=0)
    with pytest.raises(ContractError):
        generate_toy_trajectory("harmonic", 3, 10, 0.0, seed=0)


def test_spring_chain_has_no_drift(toy_traj: Trajectory) -> None:
    """Test momentum conservation keeps the centre of mass still."""
    report = stability_metrics(toy_traj)
    assert report.com_drift < 1e-9
    assert report.per_step_motion > 0.0


def test_stability_csv(tmp_path: Path) -> None:
    """Test drift, motion and the CSV layout on a uniformly moving atom."""
    x = np.arange(5.0)[:, None, None] * np.array([[[0.0, 2.0, 0.0]]])
    traj = Trajectory.from_arrays(x, np.zeros_like(x), [1], dt=1.0, name="mover")
    report = stability_metrics(traj)
    assert report.com_drift == pytest.approx(8.0)
    assert report.per_step_motion == pytest.approx(2.0)

    path = write_stability_csv([report], tmp_path / "stability.csv")
    assert path.read_text(encoding="utf-8").splitlines() == [
        "name,com_drift,per_step_motion",
        "mover,8.0,2.0",
    ]
    with pytest.raises(ContractError):
        stability_metrics(traj.window(0, 1))

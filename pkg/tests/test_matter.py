import math

import numpy as np
import pytest

from backend.core.errors import ConfigurationError, DetuningSingularityError, NumericalBlowupError
from backend.core.fields import ComplexField, density, norm_squared
from backend.core.grid import make_grid
from backend.core.params import PhysicalParams
from backend.services.matter import (
    LocalDetuning,
    MatterState,
    adiabatic_excited,
    effective_potential,
    evolve_step,
    excited_fraction,
    local_detuning,
    polarization_density,
)


def _detuning_of(value: float, n: int) -> LocalDetuning:
    return LocalDetuning(values=np.full(n, value), min_abs=abs(value), threshold=1e-6)


def test_local_detuning_examples(grid):
    n = grid.n_points
    params = PhysicalParams(dipole=1.0, detuning=1.0)

    np.testing.assert_array_equal(local_detuning(np.zeros(n), params).values, 1.0)
    shifted = local_detuning(np.full(n, 3 / (4 * math.pi)), params)
    np.testing.assert_allclose(shifted.values, 2.0, rtol=1e-14)

    with pytest.raises(DetuningSingularityError):
        local_detuning(np.full(n, 3 / (4 * math.pi)), PhysicalParams(dipole=1.0, detuning=-1.0))


def test_local_detuning_is_affine_with_collective_slope(grid):
    params = PhysicalParams(dipole=0.7, detuning=2.0)
    low = local_detuning(np.full(grid.n_points, 0.1), params).values[0]
    high = local_detuning(np.full(grid.n_points, 0.3), params).values[0]

    assert (high - low) / 0.2 == pytest.approx(4 * math.pi * 0.49 / 3, rel=1e-12)


def test_local_detuning_non_strict_flags_singularity(grid):
    rho = np.zeros(grid.n_points)
    rho[7] = 3 / (4 * math.pi)
    dl = local_detuning(rho, PhysicalParams(dipole=1.0, detuning=-1.0), strict=False)

    assert dl.singular
    assert 7 in dl.singular_indices()


def test_adiabatic_excited_examples(grid):
    n = grid.n_points
    psi = ComplexField(grid, 1.0)

    zero = adiabatic_excited(ComplexField.zeros(grid), psi, _detuning_of(1.0, n), 0.0)
    assert np.all(zero.values == 0)

    phi2 = adiabatic_excited(ComplexField(grid, 1.0), psi, _detuning_of(1.0, n), 0.0)
    np.testing.assert_allclose(phi2.values, -0.5)

    damped = adiabatic_excited(ComplexField(grid, 1.0), psi, LocalDetuning(np.zeros(n), 0.0, 10.0), 1.0)
    np.testing.assert_allclose(damped.values, 1j)
    np.testing.assert_allclose(np.abs(damped.values), np.abs(psi.values))

    with pytest.raises(DetuningSingularityError):
        adiabatic_excited(ComplexField(grid, 1.0), psi, LocalDetuning(np.zeros(n), 0.0, 1e-6), 0.0)


def test_excited_fraction_identity(grid, rng):
    n = grid.n_points
    omega = ComplexField(grid, rng.normal(size=n) + 1j * rng.normal(size=n))
    psi = ComplexField(grid, rng.normal(size=n) + 1j * rng.normal(size=n))
    dl = LocalDetuning(rng.uniform(1.0, 3.0, size=n), 1.0, 1e-6)
    gamma = 0.4

    phi2 = adiabatic_excited(omega, psi, dl, gamma)
    expected = density(omega) * density(psi) / (4 * (dl.values**2 + gamma**2 / 4))
    np.testing.assert_allclose(density(phi2), expected, rtol=1e-12)
    np.testing.assert_allclose(excited_fraction(omega, dl, gamma) * density(psi), expected, rtol=1e-12)


def test_effective_potential_examples(grid):
    n = grid.n_points
    params = PhysicalParams(dipole=1.0, detuning=1.0)

    assert np.all(effective_potential(ComplexField.zeros(grid), _detuning_of(1.0, n), params) == 0)

    dl = local_detuning(np.full(n, 3 / (4 * math.pi)), params)
    np.testing.assert_allclose(effective_potential(ComplexField(grid, 2.0), dl, params), 0.25, rtol=1e-12)

    vacuum = local_detuning(np.zeros(n), params)
    np.testing.assert_allclose(effective_potential(ComplexField(grid, 2.0), vacuum, params), 1.0)


@pytest.mark.parametrize("detuning", [3.0, -3.0])
def test_effective_potential_sign_follows_detuning(grid, detuning):
    params = PhysicalParams(dipole=1.0, detuning=detuning)
    dl = local_detuning(np.full(grid.n_points, 0.05), params)
    v = effective_potential(ComplexField(grid, 1.5), dl, params)

    assert np.all(np.sign(v) == np.sign(detuning))


def test_effective_potential_approaches_dipole_potential_linearly(grid):
    params = PhysicalParams(dipole=1.0, detuning=5.0)
    omega = ComplexField(grid, 1.0)
    rhos = np.array([1e-4, 2e-4, 4e-4, 8e-4])
    gaps = [
        abs(effective_potential(omega, local_detuning(np.full(grid.n_points, r), params), params)[0] - 0.25 / 5.0)
        for r in rhos
    ]

    assert np.polyfit(np.log(rhos), np.log(gaps), 1)[0] == pytest.approx(1.0, rel=0.01)


def test_polarization_density_examples(grid):
    params = PhysicalParams(dipole=1.0, detuning=1.0)
    psi = ComplexField(grid, 1.0)

    assert np.all(polarization_density(psi, ComplexField.zeros(grid), params).values == 0)
    np.testing.assert_allclose(polarization_density(psi, ComplexField(grid, -0.5), params).values, -0.5)


def test_polarization_modulus_ignores_a_common_phase(grid, rng):
    params = PhysicalParams(dipole=1.3, detuning=2.0)
    psi1 = ComplexField(grid, rng.normal(size=grid.n_points) + 1j * rng.normal(size=grid.n_points))
    phi2 = ComplexField(grid, rng.normal(size=grid.n_points) + 1j * rng.normal(size=grid.n_points))
    theta = rng.uniform(0.0, 2 * math.pi)
    phase = complex(math.cos(theta), math.sin(theta))

    rotated = polarization_density(psi1.scaled(phase), phi2.scaled(phase), params)
    np.testing.assert_allclose(
        np.abs(rotated.values), np.abs(polarization_density(psi1, phi2, params).values), rtol=1e-13, atol=1e-13
    )


def test_free_plane_wave_acquires_kinetic_phase():
    grid = make_grid(64, 2 * math.pi)
    k, dt = 3.0, 0.01
    psi = ComplexField(grid, np.exp(1j * k * grid.positions))
    new = evolve_step(MatterState(psi), np.zeros(grid.n_points), dt)

    np.testing.assert_allclose(new.psi1.values, psi.values * np.exp(-0.5j * k**2 * dt), atol=1e-13)
    assert new.step == 1
    assert new.time == pytest.approx(dt)


def test_constant_potential_is_global_phase(grid, rng):
    psi = ComplexField(grid, rng.normal(size=grid.n_points) + 1j * rng.normal(size=grid.n_points))
    state = MatterState(psi)
    free = evolve_step(state, np.zeros(grid.n_points), 0.02)
    shifted = evolve_step(state, np.full(grid.n_points, 1.7), 0.02)

    np.testing.assert_allclose(shifted.psi1.values, free.psi1.values * np.exp(-1.7j * 0.02), atol=1e-12)


def test_norm_is_conserved_over_many_steps():
    grid = make_grid(1024, 80.0)
    x = grid.positions
    psi = ComplexField(grid, np.exp(-(x**2) / 8.0 + 0.5j * x))
    potential = 0.3 * np.cos(2 * math.pi * x / grid.length) + 0.1 * np.exp(-(x**2))
    state = MatterState(psi)
    initial = norm_squared(psi)

    for _ in range(10_000):
        state = evolve_step(state, potential, 0.01)

    assert abs(norm_squared(state.psi1) - initial) / initial <= 1e-10


def test_free_gaussian_spreads_like_the_analytic_width():
    grid = make_grid(1024, 64.0)
    x = grid.positions
    sigma0 = 1.0
    state = MatterState(ComplexField(grid, np.exp(-(x**2) / (4 * sigma0**2))))
    zeros = np.zeros(grid.n_points)

    for _ in range(10):
        for _ in range(10):
            state = evolve_step(state, zeros, 0.05)
        rho = density(state.psi1)
        variance = np.sum(x**2 * rho) / np.sum(rho)
        expected = sigma0**2 * (1 + (state.time / (2 * sigma0**2)) ** 2)
        assert variance == pytest.approx(expected, rel=1e-6)


def test_strang_step_is_second_order():
    grid = make_grid(256, 8 * math.pi)
    x = grid.positions
    psi = ComplexField(grid, np.exp(-(x**2) / 4.0 + 1j * x))
    potential = np.cos(x)

    def evolve(dt: float, total: float = 1.0) -> np.ndarray:
        state = MatterState(psi)
        for _ in range(int(round(total / dt))):
            state = evolve_step(state, potential, dt)
        return state.psi1.values

    reference = evolve(0.05 / 16)
    coarse = np.linalg.norm(evolve(0.05) - reference)
    fine = np.linalg.norm(evolve(0.025) - reference)

    assert coarse / fine == pytest.approx(4.0, rel=0.1)


def test_evolve_step_rejects_bad_input(grid):
    state = MatterState(ComplexField(grid, 1.0))
    with pytest.raises(ConfigurationError):
        evolve_step(state, np.zeros(grid.n_points), 0.0)
    with pytest.raises(ConfigurationError):
        evolve_step(state, np.full(grid.n_points, np.inf), 0.1)


def test_evolve_step_detects_blowup(grid):
    state = MatterState(ComplexField(grid, 1.0))
    with np.errstate(all="ignore"), pytest.raises(NumericalBlowupError) as info:
        evolve_step(state, np.full(grid.n_points, 1e308), 1e10)
    assert info.value.step == 1
    assert info.value.exit_code == 4

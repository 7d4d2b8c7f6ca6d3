"""Strang split-step propagator for the ground-state matter field.

One step applies half a kinetic step in the spectral domain, the full potential
phase in real space and another half kinetic step. Every factor has unit
modulus, so the discrete norm is preserved to rounding.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from functools import lru_cache

import numpy as np

from backend.core.errors import ConfigurationError, NumericalBlowupError
from backend.core.fields import ComplexField
from backend.core.grid import Grid1D


@dataclass(frozen=True, eq=False)
class MatterState:
    """Ground-state mean field at one instant.

    Attributes:
        psi1: Ground-state field.
        time: Evolution time.
        step: Number of steps taken to reach `time`.
    """

    psi1: ComplexField
    time: float = 0.0
    step: int = 0

    @property
    def grid(self) -> Grid1D:
        return self.psi1.grid


@lru_cache(maxsize=32)
def _half_kinetic_phase(grid: Grid1D, dt: float, hbar: float, mass: float) -> np.ndarray:
    phase = np.exp(-0.25j * hbar * dt * grid.wavenumbers**2 / mass)
    phase.setflags(write=False)
    return phase


def evolve_step(
    state: MatterState,
    potential: np.ndarray,
    dt: float,
    *,
    hbar: float = 1.0,
    mass: float = 1.0,
) -> MatterState:
    """Advance the matter field by one Strang step.

    Args:
        state: Current state.
        potential: Real potential per grid point, held fixed over the step.
        dt: Time step (> 0).
        hbar: Reduced Planck constant.
        mass: Atomic mass.

    Returns:
        MatterState: New state at `state.time + dt`.

    Raises:
        ConfigurationError: When dt is not positive or the potential is not finite.
        NumericalBlowupError: When the step produces non-finite samples.
    """

    if not dt > 0:
        raise ConfigurationError(f"dt must be > 0, got {dt}", field="evolution.dt")
    potential = np.asarray(potential, dtype=float)
    if not np.all(np.isfinite(potential)):
        raise ConfigurationError("potential contains non-finite values")

    grid = state.grid
    kinetic = _half_kinetic_phase(grid, float(dt), float(hbar), float(mass))
    psi = np.fft.ifft(kinetic * np.fft.fft(state.psi1.values))
    psi = psi * np.exp(-1j * potential * (dt / hbar))
    psi = np.fft.ifft(kinetic * np.fft.fft(psi))

    if not np.all(np.isfinite(psi)):
        raise NumericalBlowupError(
            f"matter field became non-finite in step {state.step + 1} (t = {state.time:.6g}, dt = {dt:.3g}, "
            f"max|V| = {np.max(np.abs(potential)):.3g})",
            step=state.step + 1,
            time=state.time,
            dt=dt,
        )
    return replace(state, psi1=ComplexField(grid, psi), time=state.time + dt, step=state.step + 1)

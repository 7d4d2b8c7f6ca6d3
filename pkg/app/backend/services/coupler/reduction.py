"""Low-density reduction of the full model to a cubic Schrodinger equation.

Expanding Delta / Delta_l^2 to first order in the density gives

    V ~ hbar |Omega|^2 / (4 Delta) - g_eff rho,   g_eff = (2 pi d^2 / 3) |Omega|^2 / Delta^2,

an attractive cubic nonlinearity for either sign of the detuning.
"""

from __future__ import annotations

import math

import numpy as np

from backend.core.errors import ConfigurationError, SingularityError
from backend.core.fields import ComplexField, density
from backend.core.grid import Grid1D
from backend.core.params import PhysicalParams


def reduce_low_density(params: PhysicalParams, intensity: float) -> float:
    """Return the cubic coefficient g_eff for a Rabi intensity |Omega|^2.

    Args:
        params: Physical parameters.
        intensity: |Omega|^2.

    Returns:
        float: g_eff >= 0.

    Raises:
        SingularityError: When the detuning is zero.
    """

    if params.detuning == 0:
        raise SingularityError("low-density reduction is singular for detuning = 0")
    return (2.0 * math.pi * params.dipole**2 / 3.0) * float(intensity) / params.detuning**2


def cubic_potential(omega: ComplexField, rho: np.ndarray, params: PhysicalParams) -> np.ndarray:
    """Pointwise reduced potential hbar |Omega|^2 / (4 Delta) - g_eff(|Omega|^2) rho."""

    params.require_adiabatic()
    intensity = density(omega)
    g_eff = reduce_low_density(params, 1.0) * intensity
    return 0.25 * params.hbar * intensity / params.detuning - g_eff * np.asarray(rho, dtype=float)


def soliton_peak_density(g_eff: float, width: float, *, hbar: float = 1.0, mass: float = 1.0) -> float:
    """Peak density of the bright sech soliton of width `width` for coupling g_eff."""

    if not g_eff > 0:
        raise ConfigurationError("a bright soliton needs g_eff > 0 (non-zero dipole and illumination)")
    if not width > 0:
        raise ConfigurationError(f"soliton width must be > 0, got {width}", field="initial_state.width")
    return hbar**2 / (mass * g_eff * width**2)


def bright_soliton(
    grid: Grid1D,
    *,
    center: float,
    width: float,
    g_eff: float,
    hbar: float = 1.0,
    mass: float = 1.0,
) -> ComplexField:
    """Return sqrt(rho_0) sech((x - center) / width), the stationary cubic soliton."""

    peak = soliton_peak_density(g_eff, width, hbar=hbar, mass=mass)
    # periodic distance so the profile is centred on the ring
    offset = np.remainder(grid.positions - center + 0.5 * grid.length, grid.length) - 0.5 * grid.length
    return ComplexField(grid, math.sqrt(peak) / np.cosh(offset / width))


def soliton_period(width: float, *, hbar: float = 1.0, mass: float = 1.0) -> float:
    """Return pi m w^2 / (2 hbar), the conventional soliton period."""

    return 0.5 * math.pi * mass * width**2 / hbar

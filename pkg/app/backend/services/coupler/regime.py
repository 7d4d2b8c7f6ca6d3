"""Validity diagnostics for the coupled model.

The model is only trustworthy when |Delta_l| stays well above gamma, the
density stays away from the Mossotti point, the density varies slowly on the
scale of the wavelength and contact collisions are negligible against the
dipole-dipole energy.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Dict

import numpy as np

from backend.core.errors import ConfigurationError
from backend.core.fields import ComplexField, density
from backend.core.grid import Grid1D
from backend.core.params import PhysicalParams
from backend.services.coupler.state import CoupledState
from backend.services.matter.detuning import local_detuning


SATURATION_COEFFICIENT = 37.5


@dataclass(frozen=True)
class RegimeReport:
    """Regime metrics of one coupled state.

    Attributes:
        min_abs_detuning: Smallest |Delta_l| over the grid.
        max_mossotti_denominator_proximity: max |(4 pi / 3) alpha rho|; the
            Clausius-Mossotti denominator vanishes when this reaches 1.
        saturation_bound: Lower bound on U_d / U_g for neglecting collisions.
        density_gradient_metric: max |d rho / dx| / (k_L max rho).
    """

    min_abs_detuning: float
    max_mossotti_denominator_proximity: float
    saturation_bound: float
    density_gradient_metric: float

    def as_dict(self) -> Dict[str, float]:
        return asdict(self)


def saturation_bound(s: float) -> float:
    """Return 37.5 s, the bound U_d / U_g must exceed for collisions to be negligible.

    Raises:
        ConfigurationError: When s is negative.
    """

    if not s >= 0:
        raise ConfigurationError(f"saturation parameter must be >= 0, got {s}", field="saturation")
    return SATURATION_COEFFICIENT * s


def density_gradient_metric(rho: np.ndarray, grid: Grid1D, k_laser: float) -> float:
    """Return max |d rho / dx| / (k_L max rho), 0 for an empty grid."""

    peak = float(np.max(rho))
    if peak <= 0.0:
        return 0.0
    return float(np.max(np.abs(grid.gradient(rho))) / (k_laser * peak))


def regime_metrics(psi1: ComplexField, params: PhysicalParams, s: float) -> RegimeReport:
    """Compute all regime metrics of a ground-state field (no side effects)."""

    grid = psi1.grid
    rho = density(psi1)
    dl = local_detuning(rho, params, strict=False)
    peak = float(np.max(rho))
    if params.dipole == 0 or peak == 0.0:
        proximity = 0.0
    else:
        # (4 pi / 3) |alpha| rho; infinite on resonance without damping
        width = abs(complex(params.detuning, 0.5 * params.gamma))
        proximity = params.collective_shift * peak / width if width > 0 else math.inf
    return RegimeReport(
        min_abs_detuning=dl.min_abs,
        max_mossotti_denominator_proximity=proximity,
        saturation_bound=saturation_bound(s),
        density_gradient_metric=density_gradient_metric(rho, grid, params.k_laser),
    )


def regime_report(state: CoupledState, params: PhysicalParams, s: float) -> RegimeReport:
    """Compute all regime metrics for a coupled state."""

    return regime_metrics(state.matter.psi1, params, s)

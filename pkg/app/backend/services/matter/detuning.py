"""Adiabatic elimination of the excited state.

Local detuning, the adiabatic excited-state amplitude, the resulting effective
potential for the ground-state field and the polarization density.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from backend.core.errors import ConfigurationError, DetuningSingularityError
from backend.core.fields import ComplexField, density, require_same_grid
from backend.core.params import PhysicalParams


@dataclass(frozen=True, eq=False)
class LocalDetuning:
    """Density-shifted detuning Delta + (4 pi / 3 hbar) d^2 rho.

    Attributes:
        values: Local detuning per grid point.
        min_abs: Smallest |value| on the grid.
        threshold: |value| below which the detuning counts as singular.
    """

    values: np.ndarray
    min_abs: float
    threshold: float

    @property
    def singular(self) -> bool:
        return self.min_abs < self.threshold or self.min_abs == 0.0

    def singular_indices(self) -> np.ndarray:
        magnitude = np.abs(self.values)
        return np.flatnonzero((magnitude < self.threshold) | (magnitude == 0.0))


def _raise_singular(dl: LocalDetuning, context: str) -> None:
    indices = dl.singular_indices()
    raise DetuningSingularityError(
        f"{context}: |local detuning| = {dl.min_abs:.3g} is below the threshold "
        f"{dl.threshold:.3g} at {indices.size} grid point(s)",
        indices=indices,
    )


def local_detuning(rho: np.ndarray, params: PhysicalParams, *, strict: bool = True) -> LocalDetuning:
    """Evaluate the local detuning for a density.

    Args:
        rho: Non-negative density samples.
        params: Physical parameters.
        strict: When True, a singular detuning raises instead of being flagged.

    Returns:
        LocalDetuning: Values and singularity bookkeeping.

    Raises:
        ConfigurationError: When the density is negative somewhere.
        DetuningSingularityError: When strict and |Delta_l| < threshold anywhere.
    """

    rho = np.asarray(rho, dtype=float)
    if np.any(rho < 0):
        raise ConfigurationError("density must be non-negative everywhere")
    values = params.detuning + params.collective_shift * rho
    values.setflags(write=False)
    dl = LocalDetuning(values=values, min_abs=float(np.min(np.abs(values))), threshold=params.detuning_threshold)
    if strict and dl.singular:
        _raise_singular(dl, "local detuning")
    return dl


def adiabatic_excited(omega: ComplexField, psi1: ComplexField, dl: LocalDetuning, gamma: float) -> ComplexField:
    """Return phi_2 = -Omega psi_1 / (2 (Delta_l + i gamma / 2)).

    Raises:
        DetuningSingularityError: When gamma = 0 and the detuning is singular.
    """

    grid = require_same_grid(omega, psi1)
    if gamma == 0 and dl.singular:
        _raise_singular(dl, "adiabatic excited state")
    denominator = 2.0 * (dl.values + 0.5j * gamma)
    return ComplexField(grid, -omega.values * psi1.values / denominator)


def excited_fraction(omega: ComplexField, dl: LocalDetuning, gamma: float) -> np.ndarray:
    """Return |phi_2|^2 / |psi_1|^2 = |Omega|^2 / (4 (Delta_l^2 + gamma^2 / 4))."""

    return density(omega) / (4.0 * (dl.values**2 + 0.25 * gamma**2))


def effective_potential(omega: ComplexField, dl: LocalDetuning, params: PhysicalParams) -> np.ndarray:
    """Return V = (hbar / 4) Delta |Omega|^2 / Delta_l^2.

    Raises:
        DetuningSingularityError: When the local detuning is singular.
    """

    if dl.singular:
        _raise_singular(dl, "effective potential")
    return 0.25 * params.hbar * params.detuning * density(omega) / dl.values**2


def polarization_density(psi1: ComplexField, phi2: ComplexField, params: PhysicalParams) -> ComplexField:
    """Return the positive-frequency polarization d conj(psi_1) phi_2."""

    grid = require_same_grid(psi1, phi2)
    return ComplexField(grid, params.dipole * np.conj(psi1.values) * phi2.values)

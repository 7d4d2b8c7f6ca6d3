"""Light-side constitutive relations.

Polarizability, Clausius-Mossotti and low-density refractive indices, the
Lorentz-Lorenz local field and the Rabi frequency. All functions are pure and
vectorised over grid samples.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from backend.core.errors import ConfigurationError, MossottiResonanceError, SingularityError
from backend.core.fields import ComplexField, require_same_grid
from backend.core.grid import Grid1D
from backend.core.params import EPS_MOSSOTTI, PhysicalParams


FOUR_PI_THIRDS = 4.0 * math.pi / 3.0
INDEX_MODELS = ("clausius_mossotti", "low_density")


@dataclass(frozen=True, eq=False)
class IndexProfile:
    """Squared refractive index sampled on a grid.

    Attributes:
        grid: Grid the profile lives on; cell j is the slab [x_j, x_j + dx).
        n_squared: Complex n^2 per cell.
        mossotti_proximity: max |(4 pi / 3) alpha rho|; 1 marks the Mossotti
            resonance for real positive alpha, 0 is vacuum.
    """

    grid: Grid1D
    n_squared: np.ndarray
    mossotti_proximity: float = 0.0

    def __post_init__(self) -> None:
        values = np.array(self.n_squared, dtype=np.complex128)
        if values.ndim == 0:
            values = np.full(self.grid.n_points, values, dtype=np.complex128)
        if values.shape != (self.grid.n_points,):
            raise ConfigurationError(f"n_squared has shape {values.shape}, expected ({self.grid.n_points},)")
        values.setflags(write=False)
        object.__setattr__(self, "n_squared", values)

    @classmethod
    def vacuum(cls, grid: Grid1D) -> "IndexProfile":
        return cls(grid, np.ones(grid.n_points, dtype=np.complex128))

    @property
    def is_lossless(self) -> bool:
        return bool(np.all(self.n_squared.imag == 0.0))

    @property
    def refractive_index(self) -> np.ndarray:
        """Principal square root of n^2 (Im n >= 0 for absorbing media)."""

        return np.sqrt(self.n_squared)


def _check_density(rho: np.ndarray) -> np.ndarray:
    rho = np.asarray(rho, dtype=float)
    if np.any(rho < 0):
        raise ConfigurationError("density must be non-negative everywhere")
    return rho


def polarizability(params: PhysicalParams) -> complex:
    """Return the two-level polarizability alpha = -d^2 / (hbar (Delta + i gamma / 2)).

    Raises:
        SingularityError: When both the detuning and gamma vanish.
    """

    denominator = complex(params.detuning, 0.5 * params.gamma)
    if denominator == 0:
        raise SingularityError("polarizability is singular for detuning = 0 and gamma = 0")
    return -(params.dipole**2) / (params.hbar * denominator)


def clausius_mossotti(
    alpha: complex,
    rho: np.ndarray,
    grid: Grid1D,
    *,
    eps: float = EPS_MOSSOTTI,
) -> IndexProfile:
    """Evaluate n^2 = (1 + (8 pi / 3) alpha rho) / (1 - (4 pi / 3) alpha rho).

    Args:
        alpha: Polarizability.
        rho: Non-negative density samples.
        grid: Grid of the density.
        eps: Singularity threshold on the denominator.

    Returns:
        IndexProfile: The squared index.

    Raises:
        MossottiResonanceError: When |1 - (4 pi / 3) alpha rho| < eps at
            any grid point; the offending indices are attached.
    """

    rho = _check_density(rho)
    x = FOUR_PI_THIRDS * complex(alpha) * rho
    denominator = 1.0 - x
    resonant = np.flatnonzero(np.abs(denominator) < eps)
    if resonant.size:
        raise MossottiResonanceError(
            f"Clausius-Mossotti denominator vanishes at {resonant.size} grid point(s), "
            f"first at x = {grid.positions[resonant[0]]:.6g}",
            indices=resonant,
        )
    n_squared = (1.0 + 2.0 * x) / denominator
    return IndexProfile(grid, n_squared, mossotti_proximity=float(np.max(np.abs(x), initial=0.0)))


def low_density_index(alpha: complex, rho: np.ndarray) -> np.ndarray:
    """First-order index n^2 = 1 + 4 pi alpha rho (real for real alpha)."""

    rho = _check_density(rho)
    alpha = complex(alpha)
    if alpha.imag == 0:
        return 1.0 + 4.0 * math.pi * alpha.real * rho
    return 1.0 + 4.0 * math.pi * alpha * rho


def low_density_profile(alpha: complex, rho: np.ndarray, grid: Grid1D) -> IndexProfile:
    """Wrap `low_density_index` in an `IndexProfile`."""

    rho = _check_density(rho)
    proximity = float(np.max(np.abs(FOUR_PI_THIRDS * complex(alpha) * rho), initial=0.0))
    return IndexProfile(grid, low_density_index(alpha, rho), mossotti_proximity=proximity)


def lorentz_lorenz(e_mac: ComplexField, polarization: ComplexField) -> ComplexField:
    """Return the local field E_mac + (4 pi / 3) P.

    Raises:
        ShapeError: When the fields live on different grids.
    """

    grid = require_same_grid(e_mac, polarization)
    return ComplexField(grid, e_mac.values + FOUR_PI_THIRDS * polarization.values)


def rabi_frequency(e_mac: ComplexField, params: PhysicalParams) -> ComplexField:
    """Return the position dependent Rabi frequency 2 d E / hbar."""

    return e_mac.scaled(2.0 * params.dipole / params.hbar)


def index_profile(
    params: PhysicalParams,
    rho: np.ndarray,
    grid: Grid1D,
    *,
    model: str = "clausius_mossotti",
) -> IndexProfile:
    """Build the index profile of a density with the selected index model.

    Args:
        params: Physical parameters.
        rho: Density samples.
        grid: Grid.
        model: One of INDEX_MODELS.

    Returns:
        IndexProfile: The profile (vacuum when the dipole is zero).

    Raises:
        ConfigurationError: When the model name is unknown.
    """

    if model not in INDEX_MODELS:
        raise ConfigurationError(f"Unknown index model: {model!r}", field="coupling.index_model")
    if params.dipole == 0:
        return IndexProfile.vacuum(grid)
    alpha = polarizability(params)
    if model == "clausius_mossotti":
        return clausius_mossotti(alpha, rho, grid, eps=params.eps_mossotti)
    return low_density_profile(alpha, rho, grid)

"""Initial ground-state fields.

Every builder returns a field whose global phase is fixed so that psi1 is
real and positive at the density maximum (first maximum on ties).
"""

from __future__ import annotations

import math
from pathlib import Path

import numpy as np

from backend.core.errors import ConfigurationError
from backend.core.fields import ComplexField, density, norm_squared
from backend.core.grid import Grid1D
from backend.core.params import PhysicalParams
from backend.services.coupler.reduction import bright_soliton, reduce_low_density
from backend.services.persistence.snapshot import read_snapshot
from cli.logging_config import get_logger


logger = get_logger(__name__)


def fix_global_phase(psi: ComplexField) -> ComplexField:
    """Rotate the field so it is real and positive at its density maximum."""

    peak = int(np.argmax(density(psi)))
    value = psi.values[peak]
    if value == 0:
        return psi
    return psi.scaled(abs(value) / value)


def _periodic_offset(grid: Grid1D, center: float) -> np.ndarray:
    return np.remainder(grid.positions - center + 0.5 * grid.length, grid.length) - 0.5 * grid.length


def gaussian(grid: Grid1D, *, center: float = 0.0, width: float, norm: float = 1.0) -> ComplexField:
    """Gaussian packet exp(-(x - c)^2 / (4 w^2)) whose density has standard deviation w.

    The packet is normalised on the grid so that sum |psi|^2 dx equals `norm`.

    Raises:
        ConfigurationError: When width or norm is not positive.
    """

    if not width > 0:
        raise ConfigurationError(f"width must be > 0, got {width}", field="initial_state.width")
    if not norm > 0:
        raise ConfigurationError(f"norm must be > 0, got {norm}", field="initial_state.norm")
    offset = _periodic_offset(grid, center)
    psi = ComplexField(grid, np.exp(-(offset**2) / (4.0 * width**2)))
    return psi.scaled(math.sqrt(norm / norm_squared(psi)))


def plane_wave(grid: Grid1D, *, k: float, amplitude: float = 1.0) -> ComplexField:
    """Plane wave amplitude * exp(i k x) with k snapped to the nearest grid wavenumber."""

    if not amplitude > 0:
        raise ConfigurationError(f"amplitude must be > 0, got {amplitude}", field="initial_state.amplitude")
    snapped = float(grid.wavenumbers[np.argmin(np.abs(grid.wavenumbers - k))])
    if snapped != k:
        logger.info("Plane-wave wavenumber %.6g snapped to grid value %.6g", k, snapped)
    return fix_global_phase(ComplexField(grid, amplitude * np.exp(1j * snapped * grid.positions)))


def soliton(
    grid: Grid1D,
    params: PhysicalParams,
    *,
    incident: complex,
    center: float = 0.0,
    width: float,
) -> ComplexField:
    """Bright sech soliton of the low-density cubic equation for a uniform illumination.

    The peak density follows from g_eff of the Rabi intensity |2 d E / hbar|^2.
    """

    intensity = abs(2.0 * params.dipole * complex(incident) / params.hbar) ** 2
    g_eff = reduce_low_density(params, intensity)
    return bright_soliton(grid, center=center, width=width, g_eff=g_eff, hbar=params.hbar, mass=params.mass)


def from_file(grid: Grid1D, path: Path) -> ComplexField:
    """Load psi1 from a snapshot file written on the same grid.

    Raises:
        ConfigurationError: When the snapshot grid differs from `grid`.
        SnapshotFormatError: When the file is malformed.
    """

    record = read_snapshot(path)
    if record.grid != grid:
        raise ConfigurationError(
            f"snapshot grid {record.grid} does not match the configured grid {grid}",
            field="initial_state.path",
        )
    return fix_global_phase(ComplexField(grid, record.psi1))

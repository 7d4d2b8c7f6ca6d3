"""1D Helmholtz scattering solver (staircase transfer matrices).

Each grid cell [x_j, x_j + dx) is a homogeneous slab with wavenumber
k_j = k_L sqrt(n_j^2). Inside a slab the state vector (E, dE/dx) is propagated
exactly by

    M(h) = [[cos(k h),      sin(k h) / k],
            [-k sin(k h),   cos(k h)    ]]

so the only approximation is the staircase itself. Both exterior half-spaces
are vacuum. For left incidence the outgoing wave t e^{i k_L (x - x_R)} fixes the
state at the right edge; the state at every interface follows from suffix
products of backward cell matrices, which are accumulated with a log-depth
vectorised scan.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from backend.core.errors import ConditioningError, ConfigurationError
from backend.core.fields import ComplexField
from backend.core.grid import Grid1D
from backend.services.optics.index import IndexProfile
from cli.logging_config import get_logger


logger = get_logger(__name__)

OVERFLOW_LIMIT = 1e250


@dataclass(frozen=True, eq=False)
class OpticalSolution:
    """Macroscopic light envelope and scattering amplitudes.

    Attributes:
        envelope: Field envelope at the grid points (left cell edges).
        reflection: Left-incidence reflection amplitude r.
        transmission: Left-incidence transmission amplitude t.
        profile: Index profile that produced the solution.
        residual: Relative cell-continuity residual of the solution.
        reflection_right: Right-incidence reflection, when solved.
        transmission_right: Right-incidence transmission, when solved.
    """

    envelope: ComplexField
    reflection: complex
    transmission: complex
    profile: IndexProfile
    residual: float = 0.0
    reflection_right: Optional[complex] = None
    transmission_right: Optional[complex] = None

    @property
    def reflectance(self) -> float:
        return float(abs(self.reflection) ** 2)

    @property
    def transmittance(self) -> float:
        return float(abs(self.transmission) ** 2)


def _cell_matrices(k: np.ndarray, h: float) -> np.ndarray:
    """Return the (N, 2, 2) stack of slab propagators M(h) for wavenumbers k."""

    kh = k * h
    cos_kh = np.cos(kh)
    # sin(kh)/k written through sinc so that k -> 0 stays finite
    sin_over_k = h * np.sinc(kh / np.pi)
    mats = np.empty((k.size, 2, 2), dtype=np.complex128)
    mats[:, 0, 0] = cos_kh
    mats[:, 0, 1] = sin_over_k
    mats[:, 1, 0] = -k * np.sin(kh)
    mats[:, 1, 1] = cos_kh
    return mats


def _suffix_products(mats: np.ndarray) -> np.ndarray:
    """Return P_j = M_j M_{j+1} ... M_{N-1} for every j."""

    products = mats.copy()
    shift = 1
    n = products.shape[0]
    while shift < n:
        products[:-shift] = products[:-shift] @ products[shift:]
        shift *= 2
    return products


def _left_incident_states(
    n_squared: np.ndarray, k_laser: float, grid: Grid1D
) -> Tuple[np.ndarray, complex, complex, float]:
    """Solve the unit-transmission problem.

    Returns:
        Tuple of interface states (N + 1, 2) for a transmitted amplitude of 1,
        the incident amplitude a, the reflected amplitude b and the relative
        continuity residual.
    """

    dx = grid.spacing
    k = k_laser * np.sqrt(n_squared.astype(np.complex128))
    backward = _cell_matrices(k, -dx)
    outgoing = np.array([1.0, 1j * k_laser], dtype=np.complex128)

    states = np.empty((grid.n_points + 1, 2), dtype=np.complex128)
    states[:-1] = _suffix_products(backward) @ outgoing
    states[-1] = outgoing

    magnitude = np.abs(states[:, 0])
    bad = np.flatnonzero(~np.isfinite(magnitude) | (magnitude > OVERFLOW_LIMIT))
    if bad.size:
        index = int(min(bad[-1], grid.n_points - 1))
        position = float(grid.positions[index])
        raise ConditioningError(
            f"Helmholtz solve overflowed in an evanescent region near x = {position:.6g} (grid index {index})",
            index=index,
            position=position,
        )

    e0, de0 = states[0]
    incident = 0.5 * (e0 + de0 / (1j * k_laser))
    reflected = 0.5 * (e0 - de0 / (1j * k_laser))

    forward = _cell_matrices(k, dx)
    propagated = np.einsum("nij,nj->ni", forward, states[:-1])
    scale = np.array([1.0, 1.0 / k_laser])
    mismatch = np.max(np.abs((propagated - states[1:]) * scale))
    residual = float(mismatch / np.max(np.abs(states * scale)))
    return states, complex(incident), complex(reflected), residual


def _validate(profile: IndexProfile, k_laser: float) -> None:
    if not k_laser > 0:
        raise ConfigurationError(f"k_laser must be > 0, got {k_laser}", field="k_laser")
    if not np.all(np.isfinite(profile.n_squared)):
        raise ConfigurationError("index profile contains non-finite values")


def solve_helmholtz(profile: IndexProfile, k_laser: float, incident_amplitude: complex) -> OpticalSolution:
    """Solve E'' + k_L^2 n^2 E = 0 for a wave incident from the left.

    Args:
        profile: Index profile of the medium.
        k_laser: Vacuum laser wavenumber.
        incident_amplitude: Amplitude of the incident wave at the left edge.

    Returns:
        OpticalSolution: Envelope on the grid, r and t.

    Raises:
        ConditioningError: When evanescent growth overflows.
    """

    _validate(profile, k_laser)
    grid = profile.grid
    states, incident, reflected, residual = _left_incident_states(profile.n_squared, k_laser, grid)
    envelope = ComplexField(grid, states[:-1, 0] * (incident_amplitude / incident))
    logger.trace("Helmholtz solve: |a|=%.6g residual=%.2e", abs(incident), residual)
    return OpticalSolution(
        envelope=envelope,
        reflection=reflected / incident,
        transmission=1.0 / incident,
        profile=profile,
        residual=residual,
    )


def right_incident(profile: IndexProfile, k_laser: float, incident_amplitude: complex) -> OpticalSolution:
    """Solve the scattering problem for a wave incident from the right.

    The returned `reflection`/`transmission` are the right-incidence amplitudes.
    """

    _validate(profile, k_laser)
    grid = profile.grid
    mirrored = profile.n_squared[::-1]
    states, incident, reflected, residual = _left_incident_states(mirrored, k_laser, grid)
    # mirrored interfaces run from x_N down to x_0
    values = states[::-1, 0][:-1] * (incident_amplitude / incident)
    return OpticalSolution(
        envelope=ComplexField(grid, values),
        reflection=reflected / incident,
        transmission=1.0 / incident,
        profile=profile,
        residual=residual,
    )


def solve_helmholtz_two_sided(
    profile: IndexProfile,
    k_laser: float,
    left_amplitude: complex,
    right_amplitude: complex,
) -> OpticalSolution:
    """Superpose left- and right-incident solutions (standing-wave illumination).

    Returns:
        OpticalSolution: Combined envelope; `reflection`/`transmission` refer to
        left incidence, `reflection_right`/`transmission_right` to right incidence.
    """

    left = solve_helmholtz(profile, k_laser, left_amplitude)
    right = right_incident(profile, k_laser, right_amplitude)
    return OpticalSolution(
        envelope=ComplexField(profile.grid, left.envelope.values + right.envelope.values),
        reflection=left.reflection,
        transmission=left.transmission,
        profile=profile,
        residual=max(left.residual, right.residual),
        reflection_right=right.reflection,
        transmission_right=right.transmission,
    )


def transverse_solution(profile: IndexProfile, incident_amplitude: complex) -> OpticalSolution:
    """Envelope for light crossing a thin cloud perpendicular to the grid axis.

    The macroscopic field equals the incident amplitude everywhere on the axis.
    """

    grid = profile.grid
    return OpticalSolution(
        envelope=ComplexField(grid, np.full(grid.n_points, incident_amplitude, dtype=np.complex128)),
        reflection=0.0j,
        transmission=1.0 + 0.0j,
        profile=profile,
        residual=0.0,
    )

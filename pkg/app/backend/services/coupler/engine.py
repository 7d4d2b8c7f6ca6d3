"""Closure of the Maxwell-Bloch loop.

Given the ground-state field: density -> refractive index -> light envelope ->
Rabi frequency -> local detuning -> effective potential -> one split step.
Light is quasi-static: it is re-solved from the current density after every
matter step, so a `CoupledState` always carries light consistent with its
matter field.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Callable, Optional, Tuple

import numpy as np

from backend.core.errors import ConfigurationError, ConvergenceError
from backend.core.fields import ComplexField, density
from backend.core.grid import Grid1D
from backend.core.params import PhysicalParams
from backend.services.coupler.reduction import cubic_potential
from backend.services.coupler.state import CoupledState, CouplingOptions
from backend.services.matter.detuning import LocalDetuning, effective_potential, local_detuning
from backend.services.matter.propagator import MatterState, evolve_step
from backend.services.optics.helmholtz import (
    OpticalSolution,
    solve_helmholtz,
    solve_helmholtz_two_sided,
    transverse_solution,
)
from backend.services.optics.index import index_profile, rabi_frequency
from cli.logging_config import get_logger


logger = get_logger(__name__)

DensityUpdate = Callable[[OpticalSolution], np.ndarray]


@dataclass(frozen=True, eq=False)
class ScfOutcome:
    """Result of a self-consistent light solve.

    Attributes:
        optics: Final optical solution.
        residual: Relative sup-norm change of the envelope between the final
            two iterates (0 for a direct solve).
        iterations: Number of light solves performed.
        residuals: Residual history, one entry per iteration after the first.
    """

    optics: OpticalSolution
    residual: float
    iterations: int
    residuals: Tuple[float, ...] = ()


def solve_light(rho: np.ndarray, grid: Grid1D, params: PhysicalParams, options: CouplingOptions) -> OpticalSolution:
    """Solve the light for a fixed density (one direct solve)."""

    profile = index_profile(params, rho, grid, model=options.index_model)
    if options.geometry == "transverse":
        return transverse_solution(profile, options.incident_left + options.incident_right)
    if options.incident_right == 0:
        return solve_helmholtz(profile, params.k_laser, options.incident_left)
    return solve_helmholtz_two_sided(profile, params.k_laser, options.incident_left, options.incident_right)


def _relative_change(new: ComplexField, old: ComplexField) -> float:
    scale = float(np.max(np.abs(new.values)))
    if scale == 0.0:
        return float(np.max(np.abs(old.values)))
    return float(np.max(np.abs(new.values - old.values)) / scale)


def self_consistent_field(
    matter: MatterState,
    params: PhysicalParams,
    incident: complex,
    tol: float,
    max_iter: int,
    *,
    options: Optional[CouplingOptions] = None,
    update_density: Optional[DensityUpdate] = None,
) -> ScfOutcome:
    """Solve the light self-consistently with the matter density.

    The refractive index depends on the density only, so without
    `update_density` a single Helmholtz solve is exact. With `update_density`
    (field-matter sub-iteration) the density is recomputed from each light
    solution until the envelope stops changing.

    Args:
        matter: Matter state supplying the starting density.
        params: Physical parameters.
        incident: Amplitude incident from the left.
        tol: Tolerance on the relative sup-norm envelope change.
        max_iter: Maximum number of light solves.
        options: Coupling options (geometry, index model, right amplitude).
        update_density: Maps a light solution to the next density iterate.

    Returns:
        ScfOutcome: Final light solution and convergence bookkeeping.

    Raises:
        ConfigurationError: When tol or max_iter are invalid.
        ConvergenceError: When the iteration does not converge in max_iter solves.
    """

    options = replace(options or CouplingOptions(), incident_left=incident, tol=tol, max_iter=max_iter)
    if update_density is not None and options.max_iter < 2:
        raise ConfigurationError(f"sub-iteration needs max_iter >= 2, got {options.max_iter}", field="tolerances.max_iter")
    grid = matter.grid
    optics = solve_light(density(matter.psi1), grid, params, options)
    if update_density is None:
        return ScfOutcome(optics=optics, residual=0.0, iterations=1)

    residuals = []
    for iteration in range(2, options.max_iter + 1):
        rho = update_density(optics)
        candidate = solve_light(rho, grid, params, options)
        residual = _relative_change(candidate.envelope, optics.envelope)
        residuals.append(residual)
        optics = candidate
        logger.debug("SCF iteration %s: residual %.3e", iteration, residual)
        if residual <= options.tol:
            return ScfOutcome(optics=optics, residual=residual, iterations=iteration, residuals=tuple(residuals))

    raise ConvergenceError(
        f"self-consistent field did not converge in {options.max_iter} iterations "
        f"(last residual {residuals[-1]:.3e}, tol {options.tol:.1e})",
        residuals=residuals,
    )


def matter_potential(
    psi1: ComplexField,
    optics: OpticalSolution,
    params: PhysicalParams,
    options: CouplingOptions,
    rho: Optional[np.ndarray] = None,
) -> Tuple[np.ndarray, Optional[LocalDetuning]]:
    """Return the potential acting on psi1 and the local detuning behind it.

    Args:
        psi1: Ground-state field.
        optics: Light solution supplying the Rabi frequency.
        params: Physical parameters.
        options: Coupling options (matter model).
        rho: Density to use instead of |psi1|^2.

    Returns:
        Tuple[np.ndarray, Optional[LocalDetuning]]: V and Delta_l (None when
        the dipole vanishes and no detuning enters).
    """

    if params.dipole == 0:
        return np.zeros(psi1.grid.n_points), None
    rho = density(psi1) if rho is None else rho
    omega = rabi_frequency(optics.envelope, params)
    dl = local_detuning(rho, params)
    if options.matter_model == "cubic":
        return cubic_potential(omega, rho, params), dl
    return effective_potential(omega, dl, params), dl


def initial_coupled_state(matter: MatterState, params: PhysicalParams, options: CouplingOptions) -> CoupledState:
    """Solve the light for a starting matter state."""

    outcome = self_consistent_field(matter, params, options.incident_left, options.tol, options.max_iter, options=options)
    return CoupledState(matter=matter, optics=outcome.optics, residual=outcome.residual, iterations=outcome.iterations)


def advance(
    state: CoupledState,
    dt: float,
    params: PhysicalParams,
    incident: Optional[complex] = None,
    *,
    options: Optional[CouplingOptions] = None,
) -> CoupledState:
    """Advance the coupled system by one time step.

    Args:
        state: Current coupled state (light consistent with its matter).
        dt: Time step.
        params: Physical parameters.
        incident: Left incident amplitude; defaults to `options.incident_left`.
        options: Coupling options.

    Returns:
        CoupledState: State after the step, with light re-solved from the new density.
    """

    options = options or CouplingOptions()
    if incident is not None:
        options = replace(options, incident_left=incident)
    matter = state.matter

    def step(potential: np.ndarray) -> MatterState:
        return evolve_step(matter, potential, dt, hbar=params.hbar, mass=params.mass)

    potential, _ = matter_potential(matter.psi1, state.optics, params, options)
    if options.sub_iterate and params.dipole != 0:
        rho_now = density(matter.psi1)

        def midpoint_density(optics: OpticalSolution) -> np.ndarray:
            trial = step(matter_potential(matter.psi1, optics, params, options, rho=rho_now)[0])
            return 0.5 * (rho_now + density(trial.psi1))

        midpoint = self_consistent_field(
            matter, params, options.incident_left, options.tol, options.max_iter,
            options=options, update_density=midpoint_density,
        )
        potential, _ = matter_potential(matter.psi1, midpoint.optics, params, options, rho=rho_now)
        new_matter = step(potential)
        residual, iterations = midpoint.residual, midpoint.iterations
    else:
        new_matter = step(potential)
        residual, iterations = 0.0, 1

    optics = self_consistent_field(new_matter, params, options.incident_left, options.tol, options.max_iter, options=options).optics
    return CoupledState(matter=new_matter, optics=optics, residual=residual, iterations=iterations)

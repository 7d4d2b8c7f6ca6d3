"""Light side of the model: constitutive relations and the Helmholtz solver."""

from backend.services.optics.helmholtz import (
    OpticalSolution,
    right_incident,
    solve_helmholtz,
    solve_helmholtz_two_sided,
    transverse_solution,
)
from backend.services.optics.index import (
    IndexProfile,
    clausius_mossotti,
    index_profile,
    lorentz_lorenz,
    low_density_index,
    low_density_profile,
    polarizability,
    rabi_frequency,
)

__all__ = [
    "IndexProfile",
    "OpticalSolution",
    "clausius_mossotti",
    "index_profile",
    "lorentz_lorenz",
    "low_density_index",
    "low_density_profile",
    "polarizability",
    "rabi_frequency",
    "right_incident",
    "solve_helmholtz",
    "solve_helmholtz_two_sided",
    "transverse_solution",
]

"""Matter side of the model: local detuning, adiabatic elimination and propagation."""

from backend.services.matter.detuning import (
    LocalDetuning,
    adiabatic_excited,
    effective_potential,
    excited_fraction,
    local_detuning,
    polarization_density,
)
from backend.services.matter.propagator import MatterState, evolve_step

__all__ = [
    "LocalDetuning",
    "MatterState",
    "adiabatic_excited",
    "effective_potential",
    "evolve_step",
    "excited_fraction",
    "local_detuning",
    "polarization_density",
]

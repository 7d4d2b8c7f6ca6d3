"""Coupled matter/light state and the options that shape the coupling."""

from __future__ import annotations

from dataclasses import dataclass

from backend.core.errors import ConfigurationError
from backend.services.matter.propagator import MatterState
from backend.services.optics.helmholtz import OpticalSolution
from backend.services.optics.index import INDEX_MODELS


GEOMETRIES = ("longitudinal", "transverse")
MATTER_MODELS = ("full", "cubic")


@dataclass(frozen=True)
class CouplingOptions:
    """How light and matter are coupled.

    Attributes:
        incident_left: Amplitude incident from the left.
        incident_right: Amplitude incident from the right (standing waves).
        geometry: "longitudinal" solves the Helmholtz equation along the axis;
            "transverse" keeps the envelope equal to the incident amplitude.
        index_model: "clausius_mossotti" or "low_density".
        matter_model: "full" or "cubic" (low-density reduction).
        tol: Fixed-point tolerance (relative sup norm of envelope change).
        max_iter: Maximum fixed-point iterations.
        sub_iterate: Iterate light and matter to a fixed point inside each step.
    """

    incident_left: complex = 1.0 + 0.0j
    incident_right: complex = 0.0j
    geometry: str = "longitudinal"
    index_model: str = "clausius_mossotti"
    matter_model: str = "full"
    tol: float = 1e-10
    max_iter: int = 50
    sub_iterate: bool = False

    def __post_init__(self) -> None:
        if self.geometry not in GEOMETRIES:
            raise ConfigurationError(f"geometry must be one of {GEOMETRIES}, got {self.geometry!r}", field="coupling.geometry")
        if self.index_model not in INDEX_MODELS:
            raise ConfigurationError(f"index_model must be one of {INDEX_MODELS}, got {self.index_model!r}", field="coupling.index_model")
        if self.matter_model not in MATTER_MODELS:
            raise ConfigurationError(f"matter_model must be one of {MATTER_MODELS}, got {self.matter_model!r}", field="coupling.matter_model")
        if not self.tol > 0:
            raise ConfigurationError(f"tol must be > 0, got {self.tol}", field="tolerances.tol_scf")
        if self.max_iter < 1:
            raise ConfigurationError(f"max_iter must be >= 1, got {self.max_iter}", field="tolerances.max_iter")
        if self.sub_iterate and self.max_iter < 2:
            raise ConfigurationError(
                f"sub-iteration compares successive light solves and needs max_iter >= 2, got {self.max_iter}",
                field="tolerances.max_iter",
            )


@dataclass(frozen=True, eq=False)
class CoupledState:
    """Matter field plus the light solved from its density.

    Attributes:
        matter: Matter state.
        optics: Optical solution computed from `matter`'s density.
        residual: Residual of the last fixed-point solve.
        iterations: Fixed-point iterations used in the last solve.
    """

    matter: MatterState
    optics: OpticalSolution
    residual: float = 0.0
    iterations: int = 1

    @property
    def time(self) -> float:
        return self.matter.time

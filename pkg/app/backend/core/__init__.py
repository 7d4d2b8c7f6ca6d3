"""Units, parameters, grids and field containers shared by all services."""

from backend.core.errors import (
    ConditioningError,
    ConfigurationError,
    ConvergenceError,
    DetuningSingularityError,
    MossottiResonanceError,
    NumericalBlowupError,
    ShapeError,
    SimulationError,
    SingularityError,
)
from backend.core.fields import ComplexField, density, norm_squared, require_same_grid
from backend.core.grid import Grid1D, make_grid
from backend.core.params import PhysicalParams, Statistics

__all__ = [
    "ComplexField",
    "ConditioningError",
    "ConfigurationError",
    "ConvergenceError",
    "DetuningSingularityError",
    "Grid1D",
    "MossottiResonanceError",
    "NumericalBlowupError",
    "PhysicalParams",
    "ShapeError",
    "SimulationError",
    "SingularityError",
    "Statistics",
    "density",
    "make_grid",
    "norm_squared",
    "require_same_grid",
]

"""Exception hierarchy for the simulator.

Every error raised by the backend derives from `SimulationError`. The CLI maps
the families below onto process exit codes:

- `ConfigurationError`, `ShapeError`: 2
- `SingularityError`, `ConditioningError`: 3
- `NumericalBlowupError`, `ConvergenceError`: 4
"""

from __future__ import annotations

from typing import Optional, Sequence, Tuple


class SimulationError(RuntimeError):
    """Base class for all simulator errors."""

    exit_code: int = 1


class ConfigurationError(SimulationError, ValueError):
    """Raised when a grid, parameter set or config file is invalid.

    Attributes:
        field: Dotted name of the offending field, when known.
        line: 1-based line number in the config file, when known.
    """

    exit_code = 2

    def __init__(self, message: str, *, field: Optional[str] = None, line: Optional[int] = None):
        super().__init__(message)
        self.field = field
        self.line = line


class ShapeError(SimulationError, ValueError):
    """Raised when two fields do not live on the same grid."""

    exit_code = 2


class SingularityError(SimulationError):
    """Raised when the model hits a physical singularity.

    Attributes:
        indices: Grid indices where the singularity occurs (empty for scalar
            parameter singularities).
    """

    exit_code = 3

    def __init__(self, message: str, *, indices: Sequence[int] = ()):
        super().__init__(message)
        self.indices: Tuple[int, ...] = tuple(int(i) for i in indices)


class MossottiResonanceError(SingularityError):
    """Raised when the Clausius-Mossotti denominator approaches zero."""


class DetuningSingularityError(SingularityError):
    """Raised when the local detuning approaches zero."""


class ConditioningError(SimulationError):
    """Raised when the light solve overflows in an evanescent region.

    Attributes:
        index: Grid index where the overflow was detected.
        position: Coordinate of that grid point.
    """

    exit_code = 3

    def __init__(self, message: str, *, index: int, position: float):
        super().__init__(message)
        self.index = int(index)
        self.position = float(position)


class NumericalBlowupError(SimulationError):
    """Raised when a time step produces non-finite values.

    Attributes:
        step: Step counter at which the blowup was detected.
        time: Simulation time at the start of that step.
        dt: Time step.
    """

    exit_code = 4

    def __init__(self, message: str, *, step: Optional[int] = None, time: float = float("nan"), dt: float = float("nan")):
        super().__init__(message)
        self.step = step
        self.time = time
        self.dt = dt


class ConvergenceError(SimulationError):
    """Raised when a fixed-point iteration fails to converge.

    Attributes:
        residuals: Residual history, one entry per iteration.
    """

    exit_code = 4

    def __init__(self, message: str, *, residuals: Sequence[float]):
        super().__init__(message)
        self.residuals: Tuple[float, ...] = tuple(float(r) for r in residuals)

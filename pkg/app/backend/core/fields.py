"""Complex fields sampled on a `Grid1D`."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from backend.core.errors import ConfigurationError, ShapeError
from backend.core.grid import Grid1D


@dataclass(frozen=True, eq=False)
class ComplexField:
    """Complex samples on a grid.

    The sample array is copied on construction and frozen, so a field can be
    shared freely.

    Attributes:
        grid: Grid the samples live on.
        values: `grid.n_points` complex samples.
    """

    grid: Grid1D
    values: np.ndarray

    def __post_init__(self) -> None:
        values = np.array(self.values, dtype=np.complex128)
        if values.ndim == 0:
            values = np.full(self.grid.n_points, values, dtype=np.complex128)
        if values.shape != (self.grid.n_points,):
            raise ShapeError(
                f"field has shape {values.shape}, grid expects ({self.grid.n_points},)"
            )
        if not np.all(np.isfinite(values)):
            bad = np.flatnonzero(~np.isfinite(values))
            raise ConfigurationError(f"field contains non-finite samples at indices {bad[:10].tolist()}")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @classmethod
    def zeros(cls, grid: Grid1D) -> "ComplexField":
        return cls(grid, np.zeros(grid.n_points, dtype=np.complex128))

    def scaled(self, factor: complex) -> "ComplexField":
        return ComplexField(self.grid, self.values * factor)


def require_same_grid(*fields: ComplexField) -> Grid1D:
    """Return the common grid of the given fields.

    Raises:
        ShapeError: When the fields live on different grids.
    """

    grid = fields[0].grid
    for other in fields[1:]:
        if other.grid != grid:
            raise ShapeError(f"grid mismatch: {grid} vs {other.grid}")
    return grid


def norm_squared(f: ComplexField) -> float:
    """Return the discrete integral sum |f|^2 dx."""

    return float(np.sum(np.abs(f.values) ** 2) * f.grid.spacing)


def density(f: ComplexField) -> np.ndarray:
    """Return the pointwise density |f|^2 as a real array."""

    return f.values.real**2 + f.values.imag**2

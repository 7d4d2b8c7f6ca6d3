"""Uniform periodic 1D grid and its spectral companion.

Positions run from -length/2 (inclusive) to +length/2 (exclusive). The spectral
transform uses the continuum normalisation F_k = dx * sum_j f_j exp(-i k x'_j),
with x'_j measured from the first grid point, so that Parseval reads
sum |f|^2 dx = sum |F|^2 / length.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from backend.core.errors import ConfigurationError


MIN_POINTS = 8


def _readonly(values: np.ndarray) -> np.ndarray:
    values.setflags(write=False)
    return values


@dataclass(frozen=True)
class Grid1D:
    """Immutable uniform periodic grid.

    Attributes:
        n_points: Number of samples (a power of two, at least 8).
        length: Periodic box length.
    """

    n_points: int
    length: float

    @cached_property
    def spacing(self) -> float:
        return self.length / self.n_points

    @cached_property
    def positions(self) -> np.ndarray:
        return _readonly(-0.5 * self.length + self.spacing * np.arange(self.n_points))

    @cached_property
    def wavenumbers(self) -> np.ndarray:
        """Spectral wavenumbers in FFT order: 0, +dk, ..., -N/2 dk, ..., -dk."""

        return _readonly(2.0 * np.pi * np.fft.fftfreq(self.n_points, d=self.spacing))

    def forward(self, values: np.ndarray) -> np.ndarray:
        """Transform samples to the spectral domain."""

        return np.fft.fft(values) * self.spacing

    def inverse(self, spectrum: np.ndarray) -> np.ndarray:
        """Transform a spectrum back to samples (exact inverse of `forward`)."""

        return np.fft.ifft(spectrum) / self.spacing

    def spectral_norm(self, spectrum: np.ndarray) -> float:
        """Return sum |F_k|^2 / length, the Parseval partner of `norm_squared`."""

        return float(np.sum(np.abs(spectrum) ** 2) / self.length)

    def gradient(self, values: np.ndarray) -> np.ndarray:
        """Spectral derivative of periodic samples; real input gives real output."""

        spectrum = np.fft.fft(values)
        k = self.wavenumbers.copy()
        k[self.n_points // 2] = 0.0
        derivative = np.fft.ifft(1j * k * spectrum)
        if np.isrealobj(values):
            return derivative.real
        return derivative


def make_grid(n_points: int, length: float) -> Grid1D:
    """Build a periodic grid.

    Args:
        n_points: Number of samples; must be a power of two and at least 8.
        length: Box length; must be positive and finite.

    Returns:
        Grid1D: The grid.

    Raises:
        ConfigurationError: When either argument violates its rule.
    """

    if isinstance(n_points, bool) or int(n_points) != n_points:
        raise ConfigurationError(f"n_points must be an integer, got {n_points!r}", field="n_points")
    n = int(n_points)
    if n < MIN_POINTS or n & (n - 1):
        raise ConfigurationError(
            f"n_points must be a power of two >= {MIN_POINTS}, got {n}", field="n_points"
        )
    if not math.isfinite(length) or length <= 0:
        raise ConfigurationError(f"length must be a positive finite number, got {length!r}", field="length")
    return Grid1D(n_points=n, length=float(length))

"""Physical parameters of the two-level gas.

All values are in internal recoil units (hbar = m = k_L = 1) once a config has
been converted; `mass`, `k_laser` and `hbar` are kept as explicit fields so the
kernels stay dimensionally honest and can be checked with other unit choices.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from enum import Enum
from typing import Optional

from backend.core.errors import ConfigurationError, SingularityError


EPS_MOSSOTTI = 1e-6
"""Relative threshold below which the Clausius-Mossotti denominator is singular."""

EPS_DETUNING_REL = 1e-6
"""Relative (to |detuning|) local-detuning threshold used when gamma = 0."""

EPS_DETUNING_GAMMA_FACTOR = 10.0
"""Local-detuning threshold in units of gamma when gamma > 0."""


class Statistics(str, Enum):
    """Quantum statistics of the gas (metadata only)."""

    BOSE = "bose"
    FERMI = "fermi"


@dataclass(frozen=True)
class PhysicalParams:
    """Scalar constants of the model.

    Attributes:
        dipole: Dipole matrix element d.
        detuning: Laser detuning from the Lamb-shifted transition.
        gamma: Spontaneous emission rate.
        mass: Atomic mass.
        k_laser: Laser wavenumber.
        hbar: Reduced Planck constant in the working unit system.
        statistics: Bose or Fermi tag, carried to outputs only.
        eps_mossotti: Clausius-Mossotti singularity threshold.
        eps_detuning: Absolute local-detuning threshold; None picks the
            gamma or detuning based default.
    """

    dipole: float
    detuning: float
    gamma: float = 0.0
    mass: float = 1.0
    k_laser: float = 1.0
    hbar: float = 1.0
    statistics: Statistics = Statistics.BOSE
    eps_mossotti: float = EPS_MOSSOTTI
    eps_detuning: Optional[float] = None

    def __post_init__(self) -> None:
        for name in ("dipole", "detuning", "gamma", "mass", "k_laser", "hbar"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise ConfigurationError(f"{name} must be finite, got {value!r}", field=name)
        if self.mass <= 0:
            raise ConfigurationError(f"mass must be > 0, got {self.mass}", field="mass")
        if self.k_laser <= 0:
            raise ConfigurationError(f"k_laser must be > 0, got {self.k_laser}", field="k_laser")
        if self.hbar <= 0:
            raise ConfigurationError(f"hbar must be > 0, got {self.hbar}", field="hbar")
        if self.gamma < 0:
            raise ConfigurationError(f"gamma must be >= 0, got {self.gamma}", field="gamma")
        if not self.eps_mossotti > 0:
            raise ConfigurationError(f"eps_mossotti must be > 0, got {self.eps_mossotti}", field="tolerances.eps_mossotti")
        if self.eps_detuning is not None and not self.eps_detuning > 0:
            raise ConfigurationError(f"eps_detuning must be > 0, got {self.eps_detuning}", field="tolerances.eps_detuning")
        object.__setattr__(self, "statistics", Statistics(self.statistics))

    @property
    def collective_shift(self) -> float:
        """Return the local-detuning slope (4 pi / 3 hbar) d^2 per unit density."""

        return 4.0 * math.pi * self.dipole**2 / (3.0 * self.hbar)

    @property
    def detuning_threshold(self) -> float:
        """Return the smallest |local detuning| the solver accepts."""

        if self.eps_detuning is not None:
            return self.eps_detuning
        if self.gamma > 0:
            return EPS_DETUNING_GAMMA_FACTOR * self.gamma
        return EPS_DETUNING_REL * abs(self.detuning)

    def require_adiabatic(self) -> None:
        """Check that the adiabatic branch (gamma dropped) is well defined.

        Raises:
            SingularityError: When the bare detuning vanishes.
        """

        if self.detuning == 0:
            raise SingularityError("detuning must be non-zero on the adiabatic branch")

    def with_updates(self, **changes) -> "PhysicalParams":
        """Return a copy with some fields replaced."""

        return replace(self, **changes)

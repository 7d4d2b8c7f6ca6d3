"""Conversion between laboratory SI inputs and internal recoil units.

Recoil units set hbar = m = k_L = 1: lengths are measured in 1/k_L, times in
m / (hbar k_L^2) and energies in hbar^2 k_L^2 / m. The dipole moment is taken
to Gaussian form (d^2 -> d^2 / (4 pi eps0)) before scaling, because the model
equations are written in Gaussian units.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Dict

from scipy import constants

from backend.core.errors import ConfigurationError


@dataclass(frozen=True)
class RecoilScales:
    """SI values of one recoil unit of each quantity."""

    length: float
    time: float
    energy: float
    frequency: float
    dipole: float

    def as_dict(self) -> Dict[str, float]:
        return asdict(self)


IDENTITY_SCALES = RecoilScales(length=1.0, time=1.0, energy=1.0, frequency=1.0, dipole=1.0)


def recoil_scales(*, mass: float, wavelength: float) -> RecoilScales:
    """Return the SI size of the recoil units for an atom and a laser.

    Args:
        mass: Atomic mass in kg.
        wavelength: Laser vacuum wavelength in m.

    Returns:
        RecoilScales: SI value of one internal unit of each quantity.

    Raises:
        ConfigurationError: When mass or wavelength is not positive.
    """

    if not mass > 0:
        raise ConfigurationError(f"mass must be > 0, got {mass}", field="physics.mass")
    if not wavelength > 0:
        raise ConfigurationError(f"wavelength must be > 0, got {wavelength}", field="physics.wavelength")

    k_laser = 2.0 * math.pi / wavelength
    hbar = constants.hbar
    time = mass / (hbar * k_laser**2)
    # d_internal = d_SI / sqrt(4 pi eps0) / sqrt(E_unit * L_unit^3)
    dipole = math.sqrt(4.0 * math.pi * constants.epsilon_0 * hbar**2 / (mass * k_laser))
    return RecoilScales(
        length=1.0 / k_laser,
        time=time,
        energy=hbar**2 * k_laser**2 / mass,
        frequency=1.0 / time,
        dipole=dipole,
    )

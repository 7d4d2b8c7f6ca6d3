"""Snapshot records: everything needed to inspect one instant of a run.

A record is derived from the matter field and the light solved from its
density, so every array in it can be re-derived from `psi1` and the physical
parameters alone. Quantities that cannot be evaluated (light missing because
the index itself was singular, potential at a singular local detuning) are
stored as NaN and flagged; they are never clamped.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, Optional

import numpy as np

from backend.core.fields import density, norm_squared
from backend.core.grid import Grid1D, make_grid
from backend.core.params import PhysicalParams
from backend.services.coupler.reduction import cubic_potential
from backend.services.coupler.regime import regime_metrics
from backend.services.coupler.state import CouplingOptions
from backend.services.matter.detuning import (
    adiabatic_excited,
    effective_potential,
    excited_fraction,
    local_detuning,
    polarization_density,
)
from backend.services.matter.propagator import MatterState
from backend.services.optics.helmholtz import OpticalSolution
from backend.services.optics.index import lorentz_lorenz, rabi_frequency
from backend.services.persistence.snapshot_format import (
    SnapshotPayload,
    read_snapshot_file,
    write_snapshot_file,
)
from cli.logging_config import get_logger


logger = get_logger(__name__)

ARRAY_NAMES = ("psi1", "density", "n_squared", "envelope", "V", "delta_l")


@dataclass(frozen=True, eq=False)
class SnapshotRecord:
    """One written instant of a run.

    Attributes:
        grid: Spatial grid.
        time: Simulation time.
        step: Step counter.
        arrays: Named samples, keyed by ARRAY_NAMES.
        regime: Regime report as a plain dict.
        norm: Discrete norm of psi1.
        diagnostics: Scalar diagnostics (reflectance, residuals, flags, ...).
    """

    grid: Grid1D
    time: float
    step: int
    arrays: Dict[str, np.ndarray]
    regime: Dict[str, float] = field(default_factory=dict)
    norm: float = 0.0
    diagnostics: Dict[str, Any] = field(default_factory=dict)

    @property
    def psi1(self) -> np.ndarray:
        return self.arrays["psi1"]

    @property
    def density(self) -> np.ndarray:
        return self.arrays["density"]

    @property
    def n_squared(self) -> np.ndarray:
        return self.arrays["n_squared"]

    @property
    def envelope(self) -> np.ndarray:
        return self.arrays["envelope"]

    @property
    def potential(self) -> np.ndarray:
        return self.arrays["V"]

    @property
    def local_detuning(self) -> np.ndarray:
        return self.arrays["delta_l"]


def _light_diagnostics(
    matter: MatterState,
    optics: OpticalSolution,
    params: PhysicalParams,
    options: CouplingOptions,
    rho: np.ndarray,
) -> Dict[str, Any]:
    n = matter.grid.n_points
    dl = local_detuning(rho, params, strict=False)
    omega = rabi_frequency(optics.envelope, params)
    evaluable = params.dipole == 0 or not dl.singular or params.gamma > 0

    if params.dipole == 0:
        potential = np.zeros(n)
    elif dl.singular:
        potential = np.full(n, np.nan)
    elif options.matter_model == "cubic":
        potential = cubic_potential(omega, rho, params)
    else:
        potential = effective_potential(omega, dl, params)

    if evaluable:
        phi2 = adiabatic_excited(omega, matter.psi1, dl, params.gamma)
        local_field = lorentz_lorenz(optics.envelope, polarization_density(matter.psi1, phi2, params))
        max_excited = float(np.max(excited_fraction(omega, dl, params.gamma)))
        max_local_field = float(np.max(np.abs(local_field.values)))
    else:
        max_excited = max_local_field = float("nan")

    return {
        "potential": potential,
        "delta_l": np.array(dl.values),
        "singular": bool(dl.singular),
        "max_excited_fraction": max_excited,
        "max_local_field": max_local_field,
        "helmholtz_residual": float(optics.residual),
        "reflectance": float(optics.reflectance),
        "transmittance": float(optics.transmittance),
    }


def build_snapshot(
    matter: MatterState,
    optics: Optional[OpticalSolution],
    params: PhysicalParams,
    options: CouplingOptions,
    saturation: float,
    *,
    scf_residual: float = 0.0,
    scf_iterations: int = 1,
) -> SnapshotRecord:
    """Assemble a snapshot from a matter state and its light.

    Args:
        matter: Matter state.
        optics: Light solved from `matter`'s density, or None when it could
            not be solved (checkpoint of a state at the Mossotti point).
        params: Physical parameters.
        options: Coupling options.
        saturation: Saturation parameter s for the regime report.
        scf_residual: Residual of the fixed-point solve that produced the state.
        scf_iterations: Iterations of that solve.

    Returns:
        SnapshotRecord: The record.
    """

    grid = matter.grid
    rho = density(matter.psi1)
    diagnostics: Dict[str, Any] = {
        "scf_residual": float(scf_residual),
        "scf_iterations": int(scf_iterations),
        "statistics": params.statistics.value,
        "light_solved": optics is not None,
    }
    if optics is None:
        nan = np.full(grid.n_points, np.nan)
        arrays = {
            "n_squared": nan.astype(np.complex128),
            "envelope": nan.astype(np.complex128),
            "V": nan,
            "delta_l": np.array(local_detuning(rho, params, strict=False).values),
        }
        diagnostics.update(singular=True, reflectance=float("nan"), transmittance=float("nan"))
    else:
        light = _light_diagnostics(matter, optics, params, options, rho)
        arrays = {
            "n_squared": np.array(optics.profile.n_squared),
            "envelope": np.array(optics.envelope.values),
            "V": light.pop("potential"),
            "delta_l": light.pop("delta_l"),
        }
        diagnostics.update(light)

    return SnapshotRecord(
        grid=grid,
        time=float(matter.time),
        step=int(matter.step),
        arrays={"psi1": np.array(matter.psi1.values), "density": rho, **arrays},
        regime=regime_metrics(matter.psi1, params, saturation).as_dict(),
        norm=norm_squared(matter.psi1),
        diagnostics=diagnostics,
    )


def snapshot_payload(record: SnapshotRecord) -> SnapshotPayload:
    return SnapshotPayload(
        n_points=record.grid.n_points,
        length=record.grid.length,
        time=record.time,
        step=record.step,
        metadata={"regime": record.regime, "norm": record.norm, "diagnostics": record.diagnostics},
        arrays={name: record.arrays[name] for name in ARRAY_NAMES},
    )


def write_snapshot(record: SnapshotRecord, path: Path) -> Path:
    """Write a record as a binary snapshot file."""

    written = write_snapshot_file(path, snapshot_payload(record))
    logger.debug("Wrote snapshot t=%.6g to %s", record.time, written)
    return written


def read_snapshot(path: Path) -> SnapshotRecord:
    """Read a binary snapshot file back into a record.

    Raises:
        SnapshotFormatError: When the file is malformed.
        ConfigurationError: When the stored grid is invalid.
    """

    payload = read_snapshot_file(path)
    meta = payload.metadata
    return SnapshotRecord(
        grid=make_grid(payload.n_points, payload.length),
        time=payload.time,
        step=payload.step,
        arrays=dict(payload.arrays),
        regime=dict(meta.get("regime", {})),
        norm=float(meta.get("norm", float("nan"))),
        diagnostics=dict(meta.get("diagnostics", {})),
    )


def write_snapshot_text(record: SnapshotRecord, path: Path) -> Path:
    """Write the plain-text export of a record (one row per grid point)."""

    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    a = record.arrays
    columns = np.column_stack(
        [
            record.grid.positions,
            a["psi1"].real,
            a["psi1"].imag,
            a["density"],
            a["n_squared"].real,
            a["n_squared"].imag,
            a["envelope"].real,
            a["envelope"].imag,
            a["V"],
            a["delta_l"],
        ]
    )
    header = "\n".join(
        [
            f"time {record.time:.17g}",
            f"step {record.step}",
            f"norm {record.norm:.17g}",
            "x psi1_re psi1_im density n2_re n2_im envelope_re envelope_im V delta_l",
        ]
    )
    np.savetxt(path, columns, fmt="%.17e", header=header, comments="# ")
    return path

"""Schemas for run configuration files."""

from __future__ import annotations

from typing import Annotated, Any, List, Literal, Optional, Tuple, Union

from pydantic import BaseModel, BeforeValidator, ConfigDict, Field, ValidationInfo, field_validator


def _as_pair(value: Any) -> Any:
    """Accept a number, a "re+imj" string or a [re, im] pair for a complex amplitude."""

    if isinstance(value, bool):
        return value
    if isinstance(value, (int, float)):
        return (float(value), 0.0)
    if isinstance(value, complex):
        return (value.real, value.imag)
    if isinstance(value, str):
        try:
            parsed = complex(value.replace(" ", ""))
        except ValueError:
            return value
        return (parsed.real, parsed.imag)
    return value


Amplitude = Annotated[Tuple[float, float], BeforeValidator(_as_pair)]


class StrictModel(BaseModel):
    model_config = ConfigDict(extra="forbid")


class GridConfig(StrictModel):
    """Spatial grid."""

    n_points: int = Field(..., description="Number of grid points (power of two, >= 8)")
    length: float = Field(..., gt=0, description="Periodic box length (1/k_L in recoil units, m in lab units)")

    @field_validator("n_points")
    @classmethod
    def _power_of_two(cls, value: int) -> int:
        if value < 8 or value & (value - 1):
            raise ValueError("n_points must be a power of two and at least 8")
        return value


class PhysicsConfig(StrictModel):
    """Physical constants; `units` decides how the other entries are read."""

    units: Literal["recoil", "lab"] = Field("recoil", description="recoil (hbar = m = k_L = 1) or lab (SI)")
    dipole: float = Field(..., description="Dipole matrix element (C m in lab units)")
    gamma: float = Field(0.0, ge=0, description="Spontaneous emission rate (rad/s in lab units)")
    detuning: float = Field(..., description="Laser detuning (rad/s in lab units); non-zero when gamma = 0")
    mass: Optional[float] = Field(None, gt=0, validate_default=True, description="Atomic mass (kg, lab units only)")
    wavelength: Optional[float] = Field(None, gt=0, validate_default=True, description="Laser wavelength (m, lab units only)")
    k_laser: Optional[float] = Field(None, gt=0, validate_default=True, description="Laser wavenumber (recoil units only)")
    statistics: Literal["bose", "fermi"] = Field("bose", description="Quantum statistics tag (metadata only)")
    saturation: float = Field(0.01, ge=0, description="Saturation parameter s for the collision bound")

    @field_validator("detuning")
    @classmethod
    def _detuning_nonzero(cls, value: float, info: ValidationInfo) -> float:
        if value == 0 and info.data.get("gamma", 0.0) == 0:
            raise ValueError("detuning must be non-zero when gamma = 0 (adiabatic elimination is singular)")
        return value

    @field_validator("mass")
    @classmethod
    def _mass_for_units(cls, value: Optional[float], info: ValidationInfo) -> Optional[float]:
        if info.data.get("units") == "lab":
            if value is None:
                raise ValueError("mass (kg) is required with lab units")
            return value
        return 1.0 if value is None else value

    @field_validator("wavelength")
    @classmethod
    def _wavelength_for_units(cls, value: Optional[float], info: ValidationInfo) -> Optional[float]:
        if info.data.get("units") == "lab":
            if value is None:
                raise ValueError("wavelength (m) is required with lab units")
        elif value is not None:
            raise ValueError("wavelength is only used with lab units")
        return value

    @field_validator("k_laser")
    @classmethod
    def _k_laser_for_units(cls, value: Optional[float], info: ValidationInfo) -> Optional[float]:
        if info.data.get("units") == "lab":
            if value is not None:
                raise ValueError("k_laser is derived from the wavelength with lab units")
            return None
        return 1.0 if value is None else value


class GaussianState(StrictModel):
    kind: Literal["gaussian"] = "gaussian"
    center: float = Field(0.0, description="Packet centre")
    width: float = Field(1.0, gt=0, description="Standard deviation of the density")
    norm: float = Field(1.0, gt=0, description="Atom number (discrete norm)")


class PlaneWaveState(StrictModel):
    kind: Literal["plane_wave"] = "plane_wave"
    k: float = Field(..., description="Wavenumber, snapped to the grid")
    amplitude: float = Field(1.0, gt=0, description="Constant amplitude")


class SolitonState(StrictModel):
    kind: Literal["soliton"] = "soliton"
    center: float = Field(0.0, description="Soliton centre")
    width: float = Field(..., gt=0, description="sech width")


class FileState(StrictModel):
    kind: Literal["from_file"] = "from_file"
    path: str = Field(..., description="Snapshot file (relative paths are resolved against the config file)")


InitialState = Annotated[
    Union[GaussianState, PlaneWaveState, SolitonState, FileState],
    Field(discriminator="kind"),
]


class IlluminationConfig(StrictModel):
    """Incident light. Amplitudes are field envelopes in recoil units and
    vacuum Rabi frequencies (rad/s) in lab units."""

    geometry: Literal["longitudinal", "transverse"] = Field("longitudinal", description="Propagation geometry")
    left: Amplitude = Field((1.0, 0.0), description="Amplitude incident from the left, [re, im]")
    right: Amplitude = Field((0.0, 0.0), description="Amplitude incident from the right, [re, im]")


class EvolutionConfig(StrictModel):
    dt: float = Field(..., gt=0, description="Time step (s in lab units)")
    n_steps: int = Field(..., ge=1, description="Number of steps")
    snapshot_stride: int = Field(1, ge=1, description="Write a snapshot every this many steps")


class TolerancesConfig(StrictModel):
    tol_scf: float = Field(1e-10, gt=0, description="Fixed-point tolerance on the envelope change")
    max_iter: int = Field(50, ge=1, description="Fixed-point iteration limit")
    eps_mossotti: float = Field(1e-6, gt=0, description="Clausius-Mossotti singularity threshold")
    eps_detuning: Optional[float] = Field(None, gt=0, description="Absolute local-detuning threshold override")


class CouplingConfig(StrictModel):
    index_model: Literal["clausius_mossotti", "low_density"] = Field("clausius_mossotti", description="Refractive index model")
    matter_model: Literal["full", "cubic"] = Field("full", description="Matter potential model")
    sub_iterate: bool = Field(False, description="Iterate light and matter to a fixed point inside each step")


class OutputsConfig(StrictModel):
    directory: str = Field("output", description="Output directory (relative to the output root)")
    formats: List[Literal["binary", "text"]] = Field(default_factory=lambda: ["binary"], min_length=1, description="Snapshot formats")


class RunConfig(StrictModel):
    """A complete run description."""

    grid: GridConfig
    physics: PhysicsConfig
    initial_state: InitialState = Field(default_factory=GaussianState)
    illumination: IlluminationConfig = Field(default_factory=IlluminationConfig)
    evolution: EvolutionConfig
    tolerances: TolerancesConfig = Field(default_factory=TolerancesConfig)
    coupling: CouplingConfig = Field(default_factory=CouplingConfig)
    outputs: OutputsConfig = Field(default_factory=OutputsConfig)


SECTION_MODELS = (
    RunConfig,
    GridConfig,
    PhysicsConfig,
    GaussianState,
    PlaneWaveState,
    SolitonState,
    FileState,
    IlluminationConfig,
    EvolutionConfig,
    TolerancesConfig,
    CouplingConfig,
    OutputsConfig,
)

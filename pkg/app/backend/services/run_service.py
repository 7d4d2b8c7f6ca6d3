"""Run orchestration: config -> initial state -> coupled evolution -> artifacts.

A run writes into one output directory:

- `snapshot_<step>.snap` (and `.txt` when the text format is requested),
- `timeseries.txt`, one row per snapshot,
- `manifest.json`, written last, with the config echo, unit conversions,
  software versions and the abort record if the run stopped early,
- `checkpoint.snap` when the run aborted, holding the last state reached.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple

from backend.core.errors import ConfigurationError, SimulationError
from backend.core.fields import ComplexField
from backend.core.grid import Grid1D, make_grid
from backend.core.params import PhysicalParams
from backend.core.units import IDENTITY_SCALES, RecoilScales, recoil_scales
from backend.services import initial_state as initial_states
from backend.services.coupler.engine import advance, initial_coupled_state
from backend.services.coupler.regime import regime_metrics
from backend.services.coupler.state import CoupledState, CouplingOptions
from backend.services.matter.propagator import MatterState
from backend.services.persistence.artifacts import RunManifest, TimeSeries, error_to_dict, write_manifest
from backend.services.persistence.snapshot import build_snapshot, write_snapshot, write_snapshot_text
from backend.services.persistence.snapshot_format import SnapshotFormatError
from cli.logging_config import get_logger
from cli.schemas.run_config import RunConfig
from cli.settings import get_settings


logger = get_logger(__name__)

CHECKPOINT_NAME = "checkpoint.snap"


@dataclass(frozen=True, eq=False)
class SimulationSetup:
    """A config converted to internal recoil units.

    Attributes:
        grid: Spatial grid.
        params: Physical parameters.
        options: Coupling options, incident amplitudes included.
        dt: Time step.
        n_steps: Number of steps.
        snapshot_stride: Steps between snapshots.
        saturation: Saturation parameter s.
        scales: SI size of one internal unit (identity for recoil configs).
    """

    grid: Grid1D
    params: PhysicalParams
    options: CouplingOptions
    dt: float
    n_steps: int
    snapshot_stride: int
    saturation: float
    scales: RecoilScales = IDENTITY_SCALES

    def units_echo(self, units: str) -> Dict[str, Any]:
        return {
            "system": units,
            "scales_si": self.scales.as_dict(),
            "internal": {
                "length": self.grid.length,
                "dipole": self.params.dipole,
                "detuning": self.params.detuning,
                "gamma": self.params.gamma,
                "dt": self.dt,
                "incident_left": [self.options.incident_left.real, self.options.incident_left.imag],
                "incident_right": [self.options.incident_right.real, self.options.incident_right.imag],
            },
        }


@dataclass
class RunResult:
    """Outcome of one run.

    Attributes:
        exit_code: 0 on success, the error's exit code on abort.
        output_dir: Directory holding the artifacts.
        snapshots: Written snapshot files.
        error: Abort record, when the run stopped early.
    """

    exit_code: int
    output_dir: Path
    snapshots: List[Path] = field(default_factory=list)
    error: Optional[Dict[str, Any]] = None


def _complex(pair: Tuple[float, float]) -> complex:
    return complex(pair[0], pair[1])


def prepare_simulation(config: RunConfig) -> SimulationSetup:
    """Convert a validated config to internal units.

    Raises:
        ConfigurationError: When converted values violate model invariants.
    """

    physics = config.physics
    left = _complex(config.illumination.left)
    right = _complex(config.illumination.right)

    if physics.units == "lab":
        scales = recoil_scales(mass=physics.mass, wavelength=physics.wavelength)
        length_unit, time_unit = scales.length, scales.time
        dipole = physics.dipole / scales.dipole
        # lab amplitudes are vacuum Rabi frequencies: E = hbar Omega / (2 d)
        field_per_rabi = time_unit / (2.0 * dipole) if dipole != 0 else time_unit / 2.0
        left, right = left * field_per_rabi, right * field_per_rabi
        mass = k_laser = 1.0
    else:
        scales = IDENTITY_SCALES
        length_unit = time_unit = 1.0
        dipole = physics.dipole
        mass, k_laser = physics.mass, physics.k_laser

    tolerances = config.tolerances
    params = PhysicalParams(
        dipole=dipole,
        detuning=physics.detuning * time_unit,
        gamma=physics.gamma * time_unit,
        mass=mass,
        k_laser=k_laser,
        statistics=physics.statistics,
        eps_mossotti=tolerances.eps_mossotti,
        eps_detuning=tolerances.eps_detuning,
    )
    options = CouplingOptions(
        incident_left=left,
        incident_right=right,
        geometry=config.illumination.geometry,
        index_model=config.coupling.index_model,
        matter_model=config.coupling.matter_model,
        tol=tolerances.tol_scf,
        max_iter=tolerances.max_iter,
        sub_iterate=config.coupling.sub_iterate,
    )
    return SimulationSetup(
        grid=make_grid(config.grid.n_points, config.grid.length / length_unit),
        params=params,
        options=options,
        dt=config.evolution.dt / time_unit,
        n_steps=config.evolution.n_steps,
        snapshot_stride=config.evolution.snapshot_stride,
        saturation=physics.saturation,
        scales=scales,
    )


def build_initial_field(config: RunConfig, setup: SimulationSetup) -> ComplexField:
    """Build psi1 at t = 0 from the `initial_state` section."""

    spec = config.initial_state
    length_unit = setup.scales.length if config.physics.units == "lab" else 1.0
    grid = setup.grid
    if spec.kind == "gaussian":
        return initial_states.gaussian(grid, center=spec.center / length_unit, width=spec.width / length_unit, norm=spec.norm)
    if spec.kind == "plane_wave":
        return initial_states.plane_wave(grid, k=spec.k * length_unit, amplitude=spec.amplitude)
    if spec.kind == "soliton":
        return initial_states.soliton(
            grid,
            setup.params,
            incident=setup.options.incident_left + setup.options.incident_right,
            center=spec.center / length_unit,
            width=spec.width / length_unit,
        )
    return initial_states.from_file(grid, Path(spec.path))


class _RunRecorder:
    """Writes snapshots and collects time-series rows for one run."""

    def __init__(self, config: RunConfig, setup: SimulationSetup, output_dir: Path):
        self.setup = setup
        self.output_dir = output_dir
        self.formats = tuple(config.outputs.formats)
        self.series = TimeSeries()
        self.snapshots: List[Path] = []

    def record(self, state: CoupledState) -> None:
        snapshot = build_snapshot(
            state.matter,
            state.optics,
            self.setup.params,
            self.setup.options,
            self.setup.saturation,
            scf_residual=state.residual,
            scf_iterations=state.iterations,
        )
        name = f"snapshot_{state.matter.step:06d}"
        if "binary" in self.formats:
            self.snapshots.append(write_snapshot(snapshot, self.output_dir / f"{name}.snap"))
        if "text" in self.formats:
            self.snapshots.append(write_snapshot_text(snapshot, self.output_dir / f"{name}.txt"))
        self.series.append(snapshot)
        logger.info("Snapshot at t=%.6g (step %s): norm %.12g", snapshot.time, snapshot.step, snapshot.norm)

    def checkpoint(self, matter: MatterState, state: Optional[CoupledState]) -> Path:
        optics = state.optics if state is not None and state.matter is matter else None
        snapshot = build_snapshot(
            matter,
            optics,
            self.setup.params,
            self.setup.options,
            self.setup.saturation,
            scf_residual=state.residual if optics is not None else float("nan"),
            scf_iterations=state.iterations if optics is not None else 0,
        )
        return write_snapshot(snapshot, self.output_dir / CHECKPOINT_NAME)


def resolve_output_dir(config: RunConfig) -> Path:
    return get_settings().resolve_output_dir(config.outputs.directory)


def run(config: RunConfig, *, output_dir: Optional[Path] = None) -> RunResult:
    """Run one simulation and write its artifacts.

    Physics aborts (singularities, ill-conditioning, blowups, non-converged
    fixed points) do not raise: the last state reached is written as a
    checkpoint, the error is recorded in the manifest and its exit code is
    returned.

    Args:
        config: Validated run config.
        output_dir: Output directory; defaults to the configured directory
            under the output root.

    Returns:
        RunResult: Exit code, output directory and written snapshots.
    """

    output_dir = Path(output_dir) if output_dir is not None else resolve_output_dir(config)
    output_dir.mkdir(parents=True, exist_ok=True)
    manifest = RunManifest(config=config.model_dump(mode="json"), units={"system": config.physics.units})
    logger.info("Starting run into %s", output_dir)

    try:
        setup = prepare_simulation(config)
        manifest.units = setup.units_echo(config.physics.units)
        matter = MatterState(build_initial_field(config, setup))
    except (SimulationError, SnapshotFormatError) as exc:
        logger.error("Run setup failed: %s", exc)
        manifest.status, manifest.exit_code, manifest.error = "aborted", exc.exit_code, error_to_dict(exc, step=0, time=0.0)
        write_manifest(manifest, output_dir)
        return RunResult(exit_code=exc.exit_code, output_dir=output_dir, error=manifest.error)

    recorder = _RunRecorder(config, setup, output_dir)
    state: Optional[CoupledState] = None
    try:
        state = initial_coupled_state(matter, setup.params, setup.options)
        recorder.record(state)
        for n in range(1, setup.n_steps + 1):
            state = advance(state, setup.dt, setup.params, options=setup.options)
            logger.debug("Step %s: t=%.6g", n, state.time)
            if n % setup.snapshot_stride == 0 or n == setup.n_steps:
                recorder.record(state)
    except SimulationError as exc:
        current = state.matter if state is not None else matter
        logger.error("Run aborted at step %s (t=%.6g): %s", current.step, current.time, exc)
        manifest.checkpoint = recorder.checkpoint(current, state).name
        manifest.status, manifest.exit_code = "aborted", exc.exit_code
        manifest.error = error_to_dict(exc, step=current.step, time=current.time)

    recorder.series.write(output_dir)
    manifest.snapshots = [p.name for p in recorder.snapshots]
    write_manifest(manifest, output_dir)
    logger.info("Run finished with status %s (exit code %s)", manifest.status, manifest.exit_code)
    return RunResult(
        exit_code=manifest.exit_code,
        output_dir=output_dir,
        snapshots=list(recorder.snapshots),
        error=manifest.error,
    )


def check(config: RunConfig) -> Dict[str, Any]:
    """Validate a config end to end and report the regime at t = 0.

    Builds the initial state and solves its light without evolving.

    Raises:
        SimulationError: When the initial state is singular or ill-conditioned.
    """

    setup = prepare_simulation(config)
    matter = MatterState(build_initial_field(config, setup))
    state = initial_coupled_state(matter, setup.params, setup.options)
    report = regime_metrics(matter.psi1, setup.params, setup.saturation).as_dict()
    report.update(
        transmittance=state.optics.transmittance,
        reflectance=state.optics.reflectance,
        helmholtz_residual=state.optics.residual,
    )
    return report


def _run_member(config: RunConfig, output_dir: Path) -> int:
    return run(config, output_dir=output_dir).exit_code


def sweep(
    configs: Sequence[Tuple[str, RunConfig]],
    base_dir: Path,
    *,
    max_workers: Optional[int] = None,
) -> Dict[str, int]:
    """Run independent configs concurrently, one subdirectory each.

    Args:
        configs: (subdirectory name, config) pairs.
        base_dir: Parent output directory.
        max_workers: Process pool size (None lets the pool decide).

    Returns:
        Dict[str, int]: Exit code per subdirectory.

    Raises:
        ConfigurationError: When two members share a subdirectory.
    """

    names = [name for name, _ in configs]
    if len(set(names)) != len(names):
        raise ConfigurationError("sweep members must have distinct output directories", field="vary")
    base_dir = Path(base_dir)
    with ProcessPoolExecutor(max_workers=max_workers) as pool:
        futures = {name: pool.submit(_run_member, cfg, base_dir / name) for name, cfg in configs}
        results = {name: future.result() for name, future in futures.items()}
    for name, code in results.items():
        logger.info("Sweep member %s finished with exit code %s", name, code)
    return results

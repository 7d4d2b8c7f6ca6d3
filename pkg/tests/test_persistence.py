import math

import numpy as np
import pytest
from scipy.integrate import trapezoid

from backend.core.errors import ConfigurationError, ConvergenceError, NumericalBlowupError
from backend.core.fields import ComplexField, density, norm_squared
from backend.core.grid import make_grid
from backend.core.params import PhysicalParams
from backend.services import initial_state
from backend.services.coupler import CouplingOptions, solve_light
from backend.services.matter import MatterState
from backend.services.persistence import (
    SnapshotFormatError,
    build_snapshot,
    emit_plot_data,
    read_snapshot,
    write_snapshot,
    write_snapshot_text,
)
from backend.services.persistence.artifacts import error_to_dict
from backend.services.persistence.snapshot_format import SnapshotPayload, decode_snapshot, encode_snapshot
from backend.services.optics import index_profile


def snapshot_of(psi: ComplexField, params: PhysicalParams, options: CouplingOptions = CouplingOptions()):
    optics = solve_light(density(psi), psi.grid, params, options)
    return build_snapshot(MatterState(psi, time=0.5, step=50), optics, params, options, 0.01)


def read_columns(path):
    return np.loadtxt(path, comments="#", ndmin=2)


def test_payload_survives_encoding(rng):
    arrays = {
        "real": rng.normal(size=16),
        "complex": rng.normal(size=16) + 1j * rng.normal(size=16),
    }
    payload = SnapshotPayload(n_points=16, length=3.5, time=1.25, step=7, metadata={"a": 1, "b": [1.5, "x"]}, arrays=arrays)
    decoded = decode_snapshot(encode_snapshot(payload))

    assert (decoded.n_points, decoded.length, decoded.time, decoded.step) == (16, 3.5, 1.25, 7)
    assert decoded.metadata == {"a": 1, "b": [1.5, "x"]}
    np.testing.assert_array_equal(decoded.arrays["real"], arrays["real"])
    np.testing.assert_array_equal(decoded.arrays["complex"], arrays["complex"])


def test_encoding_is_little_endian_with_magic_header():
    blob = encode_snapshot(SnapshotPayload(n_points=8, length=1.0, time=0.0, step=0, arrays={"v": np.arange(8.0)}))

    assert blob[:8] == b"MBSNAP01"
    assert blob[8] == 1
    assert int.from_bytes(blob[9:13], "little") == 8


def test_corrupted_snapshot_is_rejected():
    blob = bytearray(encode_snapshot(SnapshotPayload(n_points=8, length=1.0, time=0.0, step=0, arrays={"v": np.ones(8)})))
    blob[20] ^= 0xFF

    with pytest.raises(SnapshotFormatError):
        decode_snapshot(bytes(blob))
    with pytest.raises(SnapshotFormatError):
        decode_snapshot(b"short")


def test_snapshot_is_self_consistent(grid, params, tmp_path):
    psi = initial_state.gaussian(grid, width=1.5, norm=0.3)
    record = read_snapshot(write_snapshot(snapshot_of(psi, params), tmp_path / "s.snap"))

    np.testing.assert_array_equal(record.density, density(psi))
    expected_n2 = index_profile(params, density(ComplexField(grid, record.psi1)), grid).n_squared
    np.testing.assert_allclose(record.n_squared, expected_n2, rtol=1e-14)
    np.testing.assert_allclose(record.local_detuning, params.detuning + params.collective_shift * record.density, rtol=1e-14)
    assert record.norm == pytest.approx(0.3, rel=1e-12)
    assert record.time == 0.5 and record.step == 50
    assert record.regime["saturation_bound"] == 0.375
    assert record.diagnostics["singular"] is False
    assert record.diagnostics["transmittance"] + record.diagnostics["reflectance"] == pytest.approx(1.0, abs=1e-10)


def test_checkpoint_without_light_stores_nan_not_clamped_values(grid, tmp_path):
    params = PhysicalParams(dipole=1.0, detuning=-1.0)
    psi = ComplexField(grid, math.sqrt(3 / (4 * math.pi)))
    record = build_snapshot(MatterState(psi), None, params, CouplingOptions(), 0.01)

    assert np.all(np.isnan(record.potential))
    assert np.all(np.isnan(record.n_squared.real))
    assert record.diagnostics["singular"] is True
    np.testing.assert_allclose(record.local_detuning, -1.0 + params.collective_shift * density(psi))


def test_text_export_has_one_row_per_grid_point(grid, params, tmp_path):
    path = write_snapshot_text(snapshot_of(initial_state.gaussian(grid, width=1.0), params), tmp_path / "s.txt")
    data = read_columns(path)

    assert data.shape == (grid.n_points, 10)
    np.testing.assert_allclose(data[:, 0], grid.positions)


def test_plot_density_integrates_to_norm(grid, params, tmp_path):
    psi = initial_state.gaussian(grid, width=1.2, norm=0.8)
    snap = write_snapshot(snapshot_of(psi, params), tmp_path / "g.snap")
    data = read_columns(emit_plot_data([snap], "density", tmp_path / "density.txt"))

    assert trapezoid(data[:, 1], data[:, 0]) == pytest.approx(norm_squared(psi), abs=1e-10)


def test_plot_n_squared_of_vacuum_is_one(grid, tmp_path):
    params = PhysicalParams(dipole=0.0, detuning=1.0)
    snap = write_snapshot(snapshot_of(initial_state.gaussian(grid, width=1.0), params), tmp_path / "v.snap")
    data = read_columns(emit_plot_data([snap], "n²", tmp_path / "n2.txt"))

    assert data.shape[1] == 2
    np.testing.assert_array_equal(data[:, 1], 1.0)


def test_plot_phase_of_plane_wave_is_linear(grid, params, tmp_path):
    psi = initial_state.plane_wave(grid, k=2 * math.pi * 5 / grid.length)
    snap = write_snapshot(snapshot_of(psi, PhysicalParams(dipole=0.0, detuning=1.0)), tmp_path / "p.snap")
    data = read_columns(emit_plot_data([snap], "phase", tmp_path / "phase.txt"))

    slope = np.polyfit(data[:, 0], data[:, 1], 1)[0]
    assert slope == pytest.approx(2 * math.pi * 5 / grid.length, rel=1e-10)


def test_plot_time_series_from_several_snapshots(grid, params, tmp_path):
    paths = []
    for step, norm in enumerate([0.5, 0.7, 0.9]):
        psi = initial_state.gaussian(grid, width=1.0, norm=norm)
        record = build_snapshot(MatterState(psi, time=0.1 * step, step=step), solve_light(density(psi), grid, params, CouplingOptions()), params, CouplingOptions(), 0.01)
        paths.append(write_snapshot(record, tmp_path / f"s{step}.snap"))

    data = read_columns(emit_plot_data(list(reversed(paths)), "density", tmp_path / "series.txt"))

    np.testing.assert_allclose(data[:, 0], [0.0, 0.1, 0.2])
    assert np.all(np.diff(data[:, 1]) > 0)


def test_plot_unknown_quantity_lists_valid_names(tmp_path):
    with pytest.raises(ConfigurationError) as info:
        emit_plot_data([tmp_path / "missing.snap"], "temperature", tmp_path / "out.txt")

    for name in ("density", "intensity", "n2", "V", "delta_l", "phase"):
        assert name in str(info.value)


def test_initial_states(grid, params, tmp_path):
    gauss = initial_state.gaussian(grid, center=1.0, width=1.5, norm=2.0)
    rho = density(gauss)
    mean = np.sum(grid.positions * rho) / np.sum(rho)
    assert norm_squared(gauss) == pytest.approx(2.0, rel=1e-12)
    assert math.sqrt(np.sum((grid.positions - mean) ** 2 * rho) / np.sum(rho)) == pytest.approx(1.5, rel=1e-8)

    wave = initial_state.plane_wave(grid, k=1.01)
    assert np.any(np.isclose(grid.wavenumbers, np.polyfit(grid.positions, np.unwrap(np.angle(wave.values)), 1)[0]))
    peak = int(np.argmax(density(wave)))
    assert wave.values[peak].imag == pytest.approx(0.0, abs=1e-15) and wave.values[peak].real > 0

    snap = write_snapshot(snapshot_of(gauss, params), tmp_path / "seed.snap")
    np.testing.assert_allclose(initial_state.from_file(grid, snap).values, gauss.values, rtol=1e-14)
    with pytest.raises(ConfigurationError):
        initial_state.from_file(make_grid(64, 10.0), snap)


def test_error_record_keeps_step_diagnostics():
    blowup = error_to_dict(NumericalBlowupError("psi1 became non-finite", step=7, time=0.07, dt=0.01), step=7, time=0.07)
    assert blowup["dt"] == 0.01
    assert blowup["exit_code"] == 4

    stalled = error_to_dict(ConvergenceError("no fixed point", residuals=[1e-3, float("nan"), 2e-4]), step=3, time=0.03)
    assert stalled["residuals"] == [1e-3, 2e-4]
    assert "dt" not in stalled

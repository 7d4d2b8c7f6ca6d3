from pathlib import Path

import pytest

from backend.core.errors import ConfigurationError
from backend.core.units import recoil_scales
from backend.services.run_service import prepare_simulation, resolve_output_dir
from cli.config_loader import (
    apply_override,
    dump_config,
    load_config,
    parse_config_text,
    suggest_key,
    validate_config,
)
from cli.settings import Settings, get_settings


def test_minimal_config_fills_defaults(minimal_config, write_config):
    config = load_config(write_config(minimal_config))

    assert config.grid.n_points == 128
    assert config.initial_state.kind == "gaussian"
    assert config.initial_state.width == 1.0
    assert config.illumination.geometry == "longitudinal"
    assert config.illumination.left == (1.0, 0.0)
    assert config.illumination.right == (0.0, 0.0)
    assert config.physics.mass == 1.0
    assert config.physics.k_laser == 1.0
    assert config.tolerances.tol_scf == 1e-10
    assert config.tolerances.max_iter == 50
    assert config.coupling.index_model == "clausius_mossotti"
    assert config.outputs.formats == ["binary"]


def test_zero_detuning_without_damping_names_the_field_and_line(minimal_config, write_config):
    path = write_config(minimal_config.replace("detuning: 1.0", "detuning: 0.0"))

    with pytest.raises(ConfigurationError) as info:
        load_config(path)

    assert info.value.field == "physics.detuning"
    assert info.value.line == 6
    assert "physics.detuning" in str(info.value)
    assert info.value.exit_code == 2


def test_zero_detuning_is_allowed_with_damping(minimal_data):
    data = minimal_data
    data["physics"].update(detuning=0.0, gamma=0.5)

    assert validate_config(data).physics.detuning == 0.0


def test_misspelt_key_suggests_the_known_one(minimal_config, write_config):
    path = write_config(minimal_config.replace("detuning: 1.0", "detunning: 1.0"))

    with pytest.raises(ConfigurationError) as info:
        load_config(path)

    assert info.value.field == "physics.detunning"
    assert info.value.line == 6
    assert "did you mean 'detuning'" in str(info.value)


def test_unknown_section_suggests_the_known_one(minimal_data):
    data = minimal_data
    data["grdi"] = data.pop("grid")

    with pytest.raises(ConfigurationError) as info:
        validate_config(data)
    assert "did you mean 'grid'" in str(info.value)
    assert suggest_key("zzzz") is None


def test_non_power_of_two_grid_is_rejected(minimal_data):
    data = minimal_data
    data["grid"]["n_points"] = 100

    with pytest.raises(ConfigurationError) as info:
        validate_config(data)
    assert info.value.field == "grid.n_points"


def test_yaml_syntax_error_reports_a_line():
    with pytest.raises(ConfigurationError) as info:
        parse_config_text("grid:\n  n_points: [128\n  length: 40\n")

    assert info.value.line is not None and info.value.line >= 1
    assert "parse error" in str(info.value)


def test_config_must_be_a_mapping():
    with pytest.raises(ConfigurationError):
        parse_config_text("- 1\n- 2\n")


def test_missing_file_is_a_configuration_error(tmp_path):
    with pytest.raises(ConfigurationError):
        load_config(tmp_path / "absent.yaml")


@pytest.mark.parametrize(
    "raw, expected",
    [(2, (2.0, 0.0)), ("0.5+0.25j", (0.5, 0.25)), ([0.1, -0.2], (0.1, -0.2))],
)
def test_amplitudes_accept_numbers_strings_and_pairs(minimal_data, raw, expected):
    data = minimal_data
    data["illumination"] = {"left": raw}

    assert validate_config(data).illumination.left == pytest.approx(expected)


def test_initial_state_kinds_are_discriminated(minimal_data):
    data = minimal_data
    data["initial_state"] = {"kind": "plane_wave", "k": 0.5}
    assert validate_config(data).initial_state.k == 0.5

    data["initial_state"] = {"kind": "plane_wave", "width": 1.0, "k": 0.5}
    with pytest.raises(ConfigurationError) as info:
        validate_config(data)
    assert info.value.field == "initial_state.width"


def test_relative_snapshot_path_is_resolved_against_the_config(minimal_config, write_config, tmp_path):
    path = write_config(minimal_config + "initial_state:\n  kind: from_file\n  path: seed.snap\n")

    assert load_config(path).initial_state.path == str((tmp_path / "seed.snap").resolve())


def test_dump_reads_back_identically(minimal_config, write_config):
    config = load_config(write_config(minimal_config + "illumination:\n  left: 0.5+0.5j\n"))

    assert validate_config(parse_config_text(dump_config(config))) == config


def test_recoil_units_reject_wavelength(minimal_data):
    data = minimal_data
    data["physics"]["wavelength"] = 780e-9

    with pytest.raises(ConfigurationError) as info:
        validate_config(data)
    assert info.value.field == "physics.wavelength"


def test_lab_units_require_mass(minimal_data):
    data = minimal_data
    data["physics"].update(units="lab", wavelength=780e-9)

    with pytest.raises(ConfigurationError) as info:
        validate_config(data)
    assert info.value.field == "physics.mass"


def test_lab_units_are_converted_to_recoil_units(minimal_data):
    mass, wavelength = 1.443e-25, 780e-9
    scales = recoil_scales(mass=mass, wavelength=wavelength)
    data = minimal_data
    data["grid"]["length"] = 40.0 * scales.length
    data["physics"] = {
        "units": "lab",
        "mass": mass,
        "wavelength": wavelength,
        "dipole": 2.0 * scales.dipole,
        "detuning": 3.0 / scales.time,
    }
    data["evolution"]["dt"] = 0.01 * scales.time
    data["illumination"] = {"left": 1.0 / scales.time}

    setup = prepare_simulation(validate_config(data))

    assert setup.grid.length == pytest.approx(40.0, rel=1e-12)
    assert setup.dt == pytest.approx(0.01, rel=1e-12)
    assert setup.params.dipole == pytest.approx(2.0, rel=1e-12)
    assert setup.params.detuning == pytest.approx(3.0, rel=1e-12)
    assert setup.params.mass == 1.0 and setup.params.k_laser == 1.0
    # a vacuum Rabi frequency of one inverse recoil time is an envelope of 1 / (2 d)
    assert setup.options.incident_left == pytest.approx(0.25, rel=1e-12)
    assert setup.units_echo("lab")["scales_si"]["time"] == pytest.approx(scales.time)


def test_apply_override_sets_nested_values_on_a_copy(minimal_data):
    data = minimal_data
    updated = apply_override(data, "physics.detuning", "-50")
    created = apply_override(data, "coupling.sub_iterate", "true")

    assert updated["physics"]["detuning"] == -50
    assert data["physics"]["detuning"] == 1.0
    assert created["coupling"] == {"sub_iterate": True}
    with pytest.raises(ConfigurationError):
        apply_override(data, "physics.detuning.value", "1")


def test_output_root_comes_from_the_environment(minimal_data, monkeypatch, tmp_path):
    monkeypatch.chdir(tmp_path)
    monkeypatch.setenv("MAXBLOCH_OUTPUT_ROOT", str(tmp_path / "root"))
    config = validate_config(minimal_data)

    assert resolve_output_dir(config) == tmp_path / "root" / "output"
    assert get_settings(env_file=None).resolve_output_dir("/abs/dir") == Path("/abs/dir")


def test_empty_output_root_keeps_relative_directories():
    assert Settings(OUTPUT_ROOT="").resolve_output_dir("runs/a") == Path("runs/a")


@pytest.mark.parametrize(
    "path",
    sorted((Path(__file__).resolve().parent.parent / "configs").glob("*.yaml")),
    ids=lambda p: p.name,
)
def test_example_configs_are_valid(path):
    config = load_config(path)

    assert prepare_simulation(config).n_steps == config.evolution.n_steps

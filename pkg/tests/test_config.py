import pytest

from cli.config import load_scenario_file, scenario_schema
from cli.errors import ConfigError
from cli.kernels import Interaction, Regime, Symmetry
from cli.model import LogNormalShellProfile, TabulatedProfile, UniformProfile
from cli.oracle import VerificationTolerances

BASE = {
    "scenario": {"interaction": "em", "symmetry": "sphere"},
    "profile": {"variant": "uniform", "rho0": 1.0},
}


def test_committed_scenarios_load(scenario_dir):
    paths = sorted(scenario_dir.glob("*.json"))
    assert len(paths) >= 7
    for path in paths:
        settings = load_scenario_file(path)
        scenario = settings.scenario.build()
        profile = settings.profile.build()
        assert len(settings.layer_radii(profile, scenario)) >= 2


def test_defaults_are_nondimensional(write_scenario):
    settings = load_scenario_file(write_scenario(BASE))
    scenario = settings.scenario.build()
    assert scenario.regime is Regime.RELATIVISTIC
    assert (scenario.q, scenario.m, scenario.c, scenario.eps0, scenario.G) == (1.0, 1.0, 1.0, 1.0, 1.0)
    assert settings.run.n_layers == 8
    assert settings.run.tolerances.build() == VerificationTolerances()


def test_regime_override(write_scenario):
    scenario = load_scenario_file(write_scenario(BASE)).scenario.build(Regime.CLASSICAL)
    assert scenario.kind.regime is Regime.CLASSICAL
    assert scenario.kind.interaction is Interaction.EM


@pytest.mark.parametrize(
    "profile, expected",
    [
        ({"variant": "uniform", "rho0": 0.5, "r_max": 2.0}, UniformProfile),
        ({"variant": "log_normal_shell", "f0": 1.0}, LogNormalShellProfile),
        ({"variant": "tabulated", "nodes": [[0.0, 1.0], [1.0, 0.5]], "r_max": 1.5}, TabulatedProfile),
    ],
)
def test_profile_variants(write_scenario, profile, expected):
    settings = load_scenario_file(write_scenario({**BASE, "profile": profile}))
    assert isinstance(settings.profile.build(), expected)


@pytest.mark.parametrize(
    "content",
    [
        {**BASE, "profile": {"variant": "gaussian", "rho0": 1.0}},
        {**BASE, "profile": {"variant": "uniform", "rho0": -1.0}},
        {**BASE, "scenario": {"interaction": "em", "symmetry": "torus"}},
        {**BASE, "run": {"n_layers": 1}},
        {**BASE, "run": {"tolerances": {"ode": 0.0}}},
        {**BASE, "run": {"unknown": 1}},
        {**BASE, "run": {"nondimensionalize": False}},
    ],
)
def test_invalid_files_raise_config_error(write_scenario, content):
    with pytest.raises(ConfigError):
        load_scenario_file(write_scenario(content))


def test_dimensional_runs_need_every_constant(write_scenario):
    constants = {"q": 1.6e-19, "m": 9.1e-31, "c": 3e8, "eps0": 8.85e-12, "G": 6.67e-11}
    content = {
        "scenario": {"interaction": "em", "symmetry": "cylinder", **constants},
        "profile": {"variant": "uniform", "rho0": 1e-3},
        "run": {"nondimensionalize": False},
    }
    with pytest.raises(ConfigError):
        load_scenario_file(write_scenario(content))
    content["scenario"]["slab_height_ell"] = 1e-6
    assert load_scenario_file(write_scenario(content)).scenario.build().symmetry is Symmetry.CYLINDER


def test_explicit_grid_values_are_sorted(write_scenario):
    settings = load_scenario_file(write_scenario({**BASE, "run": {"r_grid": {"values": [0.9, 0.1, 0.5]}}}))
    radii = settings.layer_radii(settings.profile.build(), settings.scenario.build())
    assert radii.tolist() == [0.1, 0.5, 0.9]


def test_missing_file_raises_config_error(tmp_path):
    with pytest.raises(ConfigError):
        load_scenario_file(tmp_path / "absent.json")


def test_schema_lists_top_level_blocks():
    schema = scenario_schema()
    assert {"scenario", "profile", "run"} <= set(schema["properties"])

import json
from pathlib import Path

import pytest

from cli.kernels import Interaction, Regime, Symmetry
from cli.model import LogNormalShellProfile, Scenario, UniformProfile
from cli.paths import SCENARIO_DIR


def make_scenario(interaction: str, symmetry: str, regime: str, **constants) -> Scenario:
    return Scenario(Interaction(interaction), Symmetry(symmetry), Regime(regime), **constants)


@pytest.fixture
def em_sphere() -> Scenario:
    return make_scenario("em", "sphere", "relativistic")


@pytest.fixture
def em_sphere_classical() -> Scenario:
    return make_scenario("em", "sphere", "classical")


@pytest.fixture
def gravity_sphere() -> Scenario:
    return make_scenario("gravity", "sphere", "relativistic")


@pytest.fixture
def gravity_sphere_classical() -> Scenario:
    return make_scenario("gravity", "sphere", "classical")


@pytest.fixture
def em_cylinder() -> Scenario:
    return make_scenario("em", "cylinder", "relativistic")


@pytest.fixture
def em_cylinder_classical() -> Scenario:
    return make_scenario("em", "cylinder", "classical")


@pytest.fixture
def unit_ball() -> UniformProfile:
    return UniformProfile(rho0=1.0, r_max=1.0)


@pytest.fixture
def dilute_ball() -> UniformProfile:
    return UniformProfile(rho0=0.1, r_max=1.0)


@pytest.fixture
def em_shell() -> LogNormalShellProfile:
    return LogNormalShellProfile(f0=3.141592653589793, tau=2.0, mu_r=0.0, sigma_r=0.2)


@pytest.fixture
def gravity_shell() -> LogNormalShellProfile:
    return LogNormalShellProfile(f0=0.2, tau=2.0, mu_r=0.0, sigma_r=0.2)


@pytest.fixture
def scenario_dir() -> Path:
    return SCENARIO_DIR


@pytest.fixture
def write_scenario(tmp_path):
    """
    Write a scenario dict to a temporary JSON file and return its path.
    """

    def _write(content: dict, name: str = "scenario.json") -> Path:
        path = tmp_path / name
        path.write_text(json.dumps(content), encoding="utf-8")
        return path

    return _write

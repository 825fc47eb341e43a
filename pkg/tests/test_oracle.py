import math

import pytest

from cli import characteristics, oracle
from cli.errors import DomainError
from cli.kernels import ALL_KINDS
from cli.model import layer_coefficients


def test_ode_follows_relativistic_explosion(em_sphere, unit_ball):
    coeffs = layer_coefficients(unit_ball, em_sphere, 1.0)
    result = oracle.integrate_layer_ode(coeffs, em_sphere.kind, 5.0)
    assert result.max_rel_err_vs_closed_form < 1e-6
    assert result.steps_taken > 0
    assert result.rejections >= 0
    assert not result.floor_reached
    assert all(abs(velocity) < 1.0 for _, _, velocity in result.samples)


def test_ode_follows_cylinder_explosion(em_cylinder, unit_ball):
    coeffs = layer_coefficients(unit_ball, em_cylinder, 0.5)
    assert oracle.integrate_layer_ode(coeffs, em_cylinder.kind, 4.0).max_rel_err_vs_closed_form < 1e-6


def test_ode_energy_is_conserved(em_sphere, gravity_sphere, unit_ball, dilute_ball):
    for scenario, profile in ((em_sphere, unit_ball), (gravity_sphere, dilute_ball)):
        coeffs = layer_coefficients(profile, scenario, 0.8)
        result = oracle.integrate_layer_ode(coeffs, scenario.kind, 1.0)
        energies = [oracle.energy_invariant(coeffs, scenario.kind, radius, velocity) for _, radius, velocity in result.samples]
        assert max(energies) - min(energies) < 1e-7


def test_ode_stops_at_the_floor_near_free_fall_time(gravity_sphere_classical, dilute_ball):
    kind = gravity_sphere_classical.kind
    coeffs = layer_coefficients(dilute_ball, gravity_sphere_classical, 1.0)
    arrival = characteristics.arrival_time(coeffs, kind)
    result = oracle.integrate_layer_ode(coeffs, kind, 2.0 * arrival)
    assert result.floor_reached
    assert result.t_floor == pytest.approx(arrival, rel=1e-5)


def test_zero_duration_returns_the_start(em_sphere, unit_ball):
    coeffs = layer_coefficients(unit_ball, em_sphere, 1e-3)
    result = oracle.integrate_layer_ode(coeffs, em_sphere.kind, 0.0)
    assert result.samples[-1][1] == 1e-3


def test_first_integral_speed_matches_closed_form(em_sphere, unit_ball):
    kind = em_sphere.kind
    coeffs = layer_coefficients(unit_ball, em_sphere, 0.6)
    radius = characteristics.layer_radius(coeffs, kind, 2.0)
    speed = characteristics.layer_speed(coeffs, kind, 2.0).speed
    assert oracle.first_integral_speed(coeffs, kind, radius) == pytest.approx(speed, rel=1e-10)


def test_time_of_flight_inverts_the_trajectory(em_sphere, unit_ball):
    kind = em_sphere.kind
    coeffs = layer_coefficients(unit_ball, em_sphere, 0.6)
    radius = characteristics.layer_radius(coeffs, kind, 2.0)
    assert oracle.time_of_flight(coeffs, kind, radius) == pytest.approx(2.0, rel=1e-9)
    assert oracle.time_of_flight(coeffs, kind, 0.6) == 0.0


def test_time_of_flight_to_the_center(gravity_sphere_classical, dilute_ball):
    kind = gravity_sphere_classical.kind
    coeffs = layer_coefficients(dilute_ball, gravity_sphere_classical, 1.0)
    flight = oracle.time_of_flight(coeffs, kind, 0.0, tol=1e-9)
    assert flight == pytest.approx(characteristics.arrival_time(coeffs, kind), rel=1e-7)


def test_unreachable_radius_raises(em_sphere, unit_ball):
    coeffs = layer_coefficients(unit_ball, em_sphere, 0.6)
    with pytest.raises(DomainError):
        oracle.time_of_flight(coeffs, em_sphere.kind, 0.3)


def test_verify_scenario_passes_for_uniform_explosion(em_sphere, unit_ball):
    report = oracle.verify_scenario(unit_ball, em_sphere, n_layers=2)
    assert report["passed"]
    (result,) = report["kinds"]
    assert result["kind"] == "em-sphere-relativistic"
    assert result["max_ode_error"] < 1e-6
    assert result["max_quadrature_error"] < 1e-9


def test_verify_scenario_reports_every_kind(em_sphere, unit_ball):
    report = oracle.verify_scenario(unit_ball, em_sphere, kinds=ALL_KINDS, n_layers=2, t_max=1.0)
    assert [result["kind"] for result in report["kinds"]] == [str(kind) for kind in ALL_KINDS]
    skipped = [result for result in report["kinds"] if "skipped" in result]
    assert [result["kind"] for result in skipped] == ["gravity-sphere-relativistic"]
    assert math.isfinite(report["kinds"][0]["max_ode_error"])


def test_verify_kind_checks_every_layer(em_sphere, unit_ball):
    result = oracle.verify_kind(unit_ball, em_sphere, n_layers=3, t_max=2.0)
    assert len(result["layers"]) == 3
    assert result["horizon"] == pytest.approx(2.0)
    assert result["ode_steps"] > 0
    assert result["passed"]


@pytest.mark.parametrize("profile_name", ["gravity_shell", "dilute_ball"])
def test_every_kind_verifies_on_shells_and_balls(request, em_sphere, profile_name):
    profile = request.getfixturevalue(profile_name)
    report = oracle.verify_scenario(profile, em_sphere, kinds=ALL_KINDS, n_layers=3)
    assert [result["kind"] for result in report["kinds"]] == [str(kind) for kind in ALL_KINDS]
    assert report["passed"], report


def test_time_of_flight_just_off_the_start(em_sphere_classical, dilute_ball):
    kind = em_sphere_classical.kind
    coeffs = layer_coefficients(dilute_ball, em_sphere_classical, 1.0)
    for t in (0.05, 0.27):
        radius = characteristics.layer_radius(coeffs, kind, t)
        assert oracle.time_of_flight(coeffs, kind, radius) == pytest.approx(t, rel=1e-8)

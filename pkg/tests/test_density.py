import math

import numpy as np
import pytest

from cli import characteristics, density
from cli.errors import DomainError, PastShockError


def test_initial_density_is_the_profile(em_sphere, em_shell):
    radius, rho = density.density_at(em_shell, em_sphere, em_sphere.kind, 0.5, 0.0)
    assert radius == 0.5
    assert rho == pytest.approx(em_shell.density(0.5, em_sphere))


def test_uniform_classical_density_dilutes_homogeneously(em_sphere_classical, unit_ball):
    kind = em_sphere_classical.kind
    t = 2.0
    for r in (0.3, 0.9):
        radius, rho = density.density_at(unit_ball, em_sphere_classical, kind, r, t)
        assert rho == pytest.approx(1.0 / (radius / r) ** 3, rel=1e-9)


def test_relativistic_uniform_explosion_piles_up_outside(em_sphere, unit_ball):
    _, inner = density.density_at(unit_ball, em_sphere, em_sphere.kind, 0.25, 5.0)
    _, outer = density.density_at(unit_ball, em_sphere, em_sphere.kind, 1.0, 5.0)
    assert outer > inner


def test_snapshot_frame(em_sphere, unit_ball):
    snapshot = density.snapshot(unit_ball, em_sphere, em_sphere.kind, [1.0, 0.5, 0.25], 1.0)
    assert snapshot.is_single_stream
    frame = snapshot.to_frame()
    assert list(frame.columns) == ["t", "r0", "R", "rho", "jac", "near_caustic"]
    assert frame["r0"].tolist() == [0.25, 0.5, 1.0]
    assert frame["R"].is_monotonic_increasing
    assert not frame["near_caustic"].any()


def test_snapshot_after_collapse_flags_every_layer(gravity_sphere_classical, dilute_ball):
    snapshot = density.snapshot(dilute_ball, gravity_sphere_classical, gravity_sphere_classical.kind, [0.5, 1.0], 2.0)
    assert not snapshot.is_single_stream
    assert all(point.past_shock and math.isnan(point.rho) for point in snapshot.points)


@pytest.mark.parametrize("profile_name, t", [("unit_ball", 3.0), ("em_shell", 1.0)])
def test_charge_between_layers_is_conserved(em_sphere, profile_name, t, request):
    profile = request.getfixturevalue(profile_name)
    assert density.conservation_check(profile, em_sphere, em_sphere.kind, 0.4, 0.9, t) < 1e-6


def test_mass_between_layers_is_conserved(gravity_sphere, dilute_ball):
    assert density.conservation_check(dilute_ball, gravity_sphere, gravity_sphere.kind, 0.3, 0.8, 1.0) < 1e-6


def test_conservation_check_needs_ordered_shell(em_sphere, unit_ball):
    with pytest.raises(DomainError):
        density.conservation_check(unit_ball, em_sphere, em_sphere.kind, 0.9, 0.4, 1.0)


def test_eulerian_resampling_of_uniform_flow(em_sphere_classical, unit_ball):
    kind = em_sphere_classical.kind
    snapshot = density.snapshot(unit_ball, em_sphere_classical, kind, np.linspace(0.1, 1.0, 10), 1.0)
    outer = snapshot.points[-1]
    frame = density.resample_to_eulerian(snapshot, [0.5 * outer.R, 0.9 * outer.R, 2.0 * outer.R])
    assert list(frame.columns) == ["t", "R", "rho"]
    assert frame["rho"].iloc[0] == pytest.approx(outer.rho, rel=1e-8)
    assert frame["rho"].iloc[1] == pytest.approx(outer.rho, rel=1e-8)
    assert math.isnan(frame["rho"].iloc[2])


def test_eulerian_resampling_needs_single_stream(gravity_sphere_classical, dilute_ball):
    snapshot = density.snapshot(dilute_ball, gravity_sphere_classical, gravity_sphere_classical.kind, [0.5, 1.0], 2.0)
    with pytest.raises(PastShockError):
        density.resample_to_eulerian(snapshot, [0.1])


def test_shell_density_spikes_just_before_the_caustic(em_sphere, em_shell):
    report = characteristics.shock_time(em_shell, em_sphere, np.geomspace(0.3, 1.6, 12), t_max=40.0, n_steps=100)
    _, rho = density.density_at(em_shell, em_sphere, em_sphere.kind, report.r_star, report.t_c * (1.0 - 1e-9))
    peak = max(em_shell.density(r, em_sphere) for r in np.geomspace(0.15, 1.7, 500))
    assert rho > 10.0 * peak

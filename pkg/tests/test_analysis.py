import math

import numpy as np
import pytest

from cli import analysis, characteristics
from cli.density import DensityPoint, DensitySnapshot
from cli.errors import DomainError, NotApplicableError, PastShockError
from cli.kernels import Symmetry
from cli.model import layer_coefficients


def make_snapshot(radii, densities, symmetry=Symmetry.SPHERE) -> DensitySnapshot:
    points = tuple(DensityPoint(r0=R, R=R, rho=rho, jac=1.0) for R, rho in zip(radii, densities))
    return DensitySnapshot(t=0.0, symmetry=symmetry, points=points)


def gaussian_error(n_points: int) -> float:
    # sqrt(rho) = exp(-R^2 / 2) has Laplacian (R^2 - 3) sqrt(rho) in three dimensions
    radii = np.linspace(0.5, 2.0, n_points)
    potential = analysis.quantum_potential(make_snapshot(radii, np.exp(-radii**2)), mass=1.0, hbar=1.0)
    frame = potential.to_frame()
    interior = frame[~frame["low_confidence"]]
    return float(np.max(np.abs(interior["Q"] - 0.5 * (interior["R"] ** 2 - 3.0))))


def test_constant_density_has_no_quantum_potential():
    radii = np.linspace(0.1, 1.0, 20)
    for symmetry in Symmetry:
        potential = analysis.quantum_potential(make_snapshot(radii, np.full(20, 2.0), symmetry), mass=1.0, hbar=1.0)
        assert max(abs(Q) for _, Q in potential.points) < 1e-10


def test_gaussian_potential_converges_at_second_order():
    coarse, fine = gaussian_error(31), gaussian_error(61)
    assert coarse < 1e-2
    assert 3.5 < coarse / fine < 4.5


def test_edges_are_low_confidence():
    radii = np.linspace(0.1, 1.0, 12)
    potential = analysis.quantum_potential(make_snapshot(radii, np.ones(12)), mass=1.0)
    flags = potential.to_frame()["low_confidence"].tolist()
    assert flags[:2] == [True, True]
    assert flags[-2:] == [True, True]
    assert not any(flags[2:-2])


def test_quantum_potential_rejects_bad_snapshots():
    with pytest.raises(DomainError):
        analysis.quantum_potential(make_snapshot(np.linspace(0.1, 1.0, 5), np.ones(5)), mass=1.0)
    with pytest.raises(DomainError):
        analysis.quantum_potential(make_snapshot(np.linspace(0.1, 1.0, 12), np.zeros(12)), mass=1.0)
    folded = DensitySnapshot(
        t=1.0, symmetry=Symmetry.SPHERE, points=(DensityPoint(r0=1.0, R=0.5, rho=math.nan, jac=-0.1, past_shock=True),)
    )
    with pytest.raises(PastShockError):
        analysis.quantum_potential(folded, mass=1.0)


def test_explosion_velocity_coefficient(em_sphere_classical, unit_ball):
    kind = em_sphere_classical.kind
    coeffs = layer_coefficients(unit_ball, em_sphere_classical, 0.5)
    t = 0.8 / coeffs.lam
    ratio = characteristics.layer_radius(coeffs, kind, t) / 0.5
    coefficient = analysis.effective_velocity_coefficient(unit_ball, em_sphere_classical, t)
    assert coefficient.b == pytest.approx(coeffs.lam * math.sqrt((ratio - 1.0) / ratio) / ratio, rel=1e-10)
    assert coefficient.stiffness == pytest.approx(coeffs.lam**2 / (2.0 * ratio**3), rel=1e-6)
    assert coefficient.potential_coefficient == pytest.approx(-0.5 * coefficient.stiffness)


def test_collapse_velocity_coefficient(gravity_sphere_classical, dilute_ball):
    kind = gravity_sphere_classical.kind
    coeffs = layer_coefficients(dilute_ball, gravity_sphere_classical, 0.5)
    t = 1.0
    ratio = characteristics.layer_radius(coeffs, kind, t) / 0.5
    coefficient = analysis.effective_velocity_coefficient(dilute_ball, gravity_sphere_classical, t)
    assert coefficient.stiffness == pytest.approx(-(coeffs.lam**2) / (2.0 * ratio**3), rel=1e-6)
    assert coefficient.potential_coefficient > 0.0


def test_velocity_coefficient_grows_during_collapse(gravity_sphere_classical, dilute_ball):
    values = [
        analysis.effective_velocity_coefficient(dilute_ball, gravity_sphere_classical, t).b for t in (0.3, 0.8, 1.3)
    ]
    assert 0.0 < values[0] < values[1] < values[2]


def test_velocity_coefficient_grows_early_in_explosion(em_sphere_classical, unit_ball):
    lam = layer_coefficients(unit_ball, em_sphere_classical, 0.5).lam
    values = [
        analysis.effective_velocity_coefficient(unit_ball, em_sphere_classical, fraction / lam).b
        for fraction in (0.2, 0.6, 1.0)
    ]
    assert 0.0 < values[0] < values[1] < values[2]


def test_velocity_coefficient_at_the_start_uses_one_sided_difference(em_sphere_classical, unit_ball):
    coefficient = analysis.effective_velocity_coefficient(unit_ball, em_sphere_classical, 0.0)
    assert coefficient.b == 0.0
    assert coefficient.stiffness == pytest.approx(1.0 / 3.0, rel=1e-4)


def test_uniform_flow_is_linear(em_sphere_classical, gravity_sphere_classical, unit_ball, dilute_ball):
    radii = np.linspace(0.1, 1.0, 7)
    assert analysis.velocity_field_linearity(unit_ball, em_sphere_classical, 2.0, radii) < 1e-10
    assert analysis.velocity_field_linearity(dilute_ball, gravity_sphere_classical, 1.0, radii) < 1e-10


def test_velocity_coefficient_needs_uniform_classical_flow(em_sphere, unit_ball, em_sphere_classical, em_shell):
    with pytest.raises(NotApplicableError):
        analysis.effective_velocity_coefficient(unit_ball, em_sphere, 1.0)
    with pytest.raises(NotApplicableError):
        analysis.effective_velocity_coefficient(em_shell, em_sphere_classical, 1.0)

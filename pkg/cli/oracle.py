"""
Independent checks of the closed-form trajectories: direct integration of the
equation of motion, time of flight from the energy first integral, and a
driver that runs both against every layer of a scenario.

Nothing here calls the kernels except to compare against them.
"""

from dataclasses import dataclass
import math
from typing import Callable, Iterable, Optional

import numpy as np
from scipy import integrate

from cli import characteristics, constants
from cli.errors import (
    DomainError,
    NumericDomainError,
    PastCollapseError,
    QuasiRelativismError,
    SelfConsistentError,
)
from cli.kernels import KernelKind, adaptive_quad
from cli.model import InitialProfile, LayerCoefficients, Scenario, layer_coefficients, layer_grid, reference_radius


@dataclass(frozen=True)
class OdeResult:
    samples: tuple[tuple[float, float, float], ...]
    max_rel_err_vs_closed_form: float
    steps_taken: int
    rejections: int
    floor_reached: bool = False
    t_floor: Optional[float] = None


def _force_potential(kind: KernelKind, radius: float) -> float:
    # phi(R) with force = -sign * theta^2 * dphi/dR
    return 1.0 / radius if kind.is_sphere else -math.log(radius)


def energy_invariant(coeffs: LayerCoefficients, kind: KernelKind, radius: float, velocity: float) -> float:
    """
    Conserved energy per unit rest energy (relativistic) or per unit mass (classical).
    """
    potential = kind.sign * coeffs.theta_sq * _force_potential(kind, radius)
    if kind.is_relativistic:
        gamma = 1.0 / math.sqrt((1.0 - velocity / coeffs.c) * (1.0 + velocity / coeffs.c))
        return gamma + potential / coeffs.c**2
    return 0.5 * velocity * velocity + potential


def _velocity(kind: KernelKind, momentum: float, c: float) -> float:
    if kind.is_relativistic:
        return momentum / math.sqrt(1.0 + (momentum / c) ** 2)
    return momentum


def integrate_layer_ode(
    coeffs: LayerCoefficients, kind: KernelKind, t_end: float, tol: float = constants.ODE_TOLERANCE
) -> OdeResult:
    """
    Integrate d(gamma Rdot)/dt = +-theta^2 / R^k from rest at R = r with RK45.

    The state is (R, gamma*Rdot) so |Rdot| < c holds for every accepted step.
    Collapsing layers stop at a floor radius of 1e-8 r.
    """
    if not (math.isfinite(t_end) and t_end >= 0.0):
        raise DomainError(f"end time {t_end!r} must be finite and nonnegative")
    r0, k = coeffs.r, kind.exponent
    if coeffs.theta_sq == 0.0 or t_end == 0.0:
        return OdeResult(samples=((0.0, r0, 0.0), (t_end, r0, 0.0)), max_rel_err_vs_closed_form=0.0, steps_taken=0, rejections=0)

    force = kind.sign * coeffs.theta_sq
    floor = constants.ODE_FLOOR_FRACTION * r0

    def rhs(t: float, state: np.ndarray) -> list[float]:
        radius, momentum = state
        return [_velocity(kind, momentum, coeffs.c), force / max(abs(radius), floor) ** k]

    def reach_floor(t: float, state: np.ndarray) -> float:
        return state[0] - floor

    reach_floor.terminal = True
    reach_floor.direction = -1

    speed_scale = math.sqrt(coeffs.theta_sq / r0 ** (k - 1))
    solution = integrate.solve_ivp(
        rhs,
        (0.0, t_end),
        [r0, 0.0],
        method="RK45",
        rtol=tol,
        atol=[tol * r0, tol * speed_scale],
        events=None if kind.is_expansion else reach_floor,
    )
    if solution.status < 0:
        raise NumericDomainError(f"ODE integration failed: {solution.message}")

    samples = tuple(
        (float(t), float(radius), _velocity(kind, float(momentum), coeffs.c))
        for t, radius, momentum in zip(solution.t, solution.y[0], solution.y[1])
    )
    max_error = 0.0
    for t, radius, _ in samples:
        try:
            closed = characteristics.layer_radius(coeffs, kind, t)
        except PastCollapseError:
            continue
        max_error = max(max_error, abs(closed - radius) / r0)

    steps = len(solution.t) - 1
    # every RK45 attempt costs n_stages evaluations after the two spent choosing the first step
    attempts = (solution.nfev - 2) // integrate.RK45.n_stages
    floor_reached = solution.status == 1
    return OdeResult(
        samples=samples,
        max_rel_err_vs_closed_form=max_error,
        steps_taken=steps,
        rejections=max(attempts - steps, 0),
        floor_reached=floor_reached,
        t_floor=float(solution.t[-1]) if floor_reached else None,
    )


def _check_reachable(kind: KernelKind, x: float):
    if kind.is_expansion and not x >= 1.0:
        raise DomainError(f"an expanding layer never reaches R/r = {x!r}")
    if not kind.is_expansion and not 0.0 <= x <= 1.0:
        raise DomainError(f"a collapsing layer never reaches R/r = {x!r}")


def first_integral_speed(coeffs: LayerCoefficients, kind: KernelKind, R: float) -> float:
    """
    Speed at radius R from conservation of energy.
    """
    x = R / coeffs.r
    _check_reachable(kind, x)
    if kind.is_sphere:
        excess = math.inf if x == 0.0 else abs(x - 1.0) / x
    else:
        excess = math.inf if x == 0.0 else abs(math.log(x))

    if kind.is_relativistic:
        y = coeffs.theta_sq / coeffs.c**2
        if kind.is_sphere:
            y /= coeffs.r
        work = y * excess
        if math.isinf(work):
            return coeffs.c
        return coeffs.c * math.sqrt(work * (2.0 + work)) / (1.0 + work)

    scale = 2.0 * coeffs.theta_sq / coeffs.r if kind.is_sphere else 2.0 * coeffs.theta_sq
    return math.sqrt(scale * excess)


def _excess_per_variable(kind: KernelKind, s: float) -> float:
    # potential drop at R = r (1 +- s), divided by s; finite as s -> 0
    if kind.is_sphere:
        if kind.is_expansion:
            return 1.0 / (1.0 + s)
        return math.inf if s >= 1.0 else 1.0 / (1.0 - s)
    if s == 0.0:
        return 1.0
    if kind.is_expansion:
        return math.log1p(s) / s
    return math.inf if s >= 1.0 else -math.log1p(-s) / s


def _flight_integrand(coeffs: LayerCoefficients, kind: KernelKind) -> Callable[[float], float]:
    """
    dt/du along R = r (1 +- u^2), with the factor u of dR/du cancelled against the speed.
    """
    r, c = coeffs.r, coeffs.c
    if kind.is_relativistic:
        y = coeffs.theta_sq / c**2
        if kind.is_sphere:
            y /= r

        def integrand(u: float) -> float:
            excess = _excess_per_variable(kind, u * u)
            if math.isinf(excess):
                return 2.0 * r * u / c
            work = y * u * u * excess
            return 2.0 * r * (1.0 + work) / (c * math.sqrt(y * excess * (2.0 + work)))

        return integrand

    scale = 2.0 * coeffs.theta_sq / r if kind.is_sphere else 2.0 * coeffs.theta_sq

    def integrand(u: float) -> float:
        excess = _excess_per_variable(kind, u * u)
        return 0.0 if math.isinf(excess) else 2.0 * r / math.sqrt(scale * excess)

    return integrand


def time_of_flight(
    coeffs: LayerCoefficients, kind: KernelKind, R_target: float, tol: float = constants.FLIGHT_QUAD_TOLERANCE
) -> float:
    """
    Time for the layer to reach R_target, integrating dR / v(R) in u with R = r (1 +- u^2).
    """
    x = R_target / coeffs.r
    _check_reachable(kind, x)
    if x == 1.0:
        return 0.0
    if coeffs.theta_sq == 0.0:
        raise DomainError("a layer without enclosed charge or mass does not move")

    integrand = _flight_integrand(coeffs, kind)
    u_end = math.sqrt(abs(x - 1.0))
    # absolute floor on the scale of the flight time near the start
    abs_tol = tol * integrand(0.0) * u_end
    try:
        return adaptive_quad(integrand, 0.0, u_end, tol=tol, abs_tol=abs_tol)
    except (ArithmeticError, ValueError) as error:
        if isinstance(error, SelfConsistentError):
            raise
        raise NumericDomainError(f"time of flight to R={R_target!r} failed: {error}") from error


@dataclass(frozen=True)
class VerificationTolerances:
    ode: float = constants.VERIFY_ODE_TOLERANCE
    quadrature: float = constants.VERIFY_QUADRATURE_TOLERANCE
    integration: float = constants.ODE_TOLERANCE


def _verification_horizon(
    profile: InitialProfile, scenario: Scenario, radii: list[float], t_max: Optional[float]
) -> float:
    horizon = t_max if t_max is not None else constants.VERIFY_LIGHT_CROSSINGS * reference_radius(profile, scenario) / scenario.c
    report = characteristics.shock_time(profile, scenario, radii, t_max=horizon, n_steps=constants.SHOCK_TIME_STEPS // 4)
    if report.first_time is not None:
        return constants.VERIFY_TIME_FRACTION * report.first_time
    return horizon


def verify_kind(
    profile: InitialProfile,
    scenario: Scenario,
    n_layers: int = 3,
    t_max: Optional[float] = None,
    tolerances: VerificationTolerances = VerificationTolerances(),
) -> dict:
    """
    Three-way agreement of closed form, ODE, and first-integral quadrature on
    `n_layers` layers of one scenario.
    """
    kind = scenario.kind
    radii = [float(r) for r in layer_grid(profile, scenario, n_layers)]
    horizon = _verification_horizon(profile, scenario, radii, t_max)

    max_ode, max_quadrature, steps, rejections = 0.0, 0.0, 0, 0
    for r in radii:
        coeffs = layer_coefficients(profile, scenario, r)
        t_end = horizon
        if not kind.is_expansion and coeffs.lam > 0.0:
            t_end = min(t_end, constants.VERIFY_TIME_FRACTION * characteristics.arrival_time(coeffs, kind))

        ode = integrate_layer_ode(coeffs, kind, t_end, tol=tolerances.integration)
        max_ode = max(max_ode, ode.max_rel_err_vs_closed_form)
        steps += ode.steps_taken
        rejections += ode.rejections

        if coeffs.theta_sq == 0.0:
            continue
        for t in np.linspace(0.0, t_end, constants.VERIFY_SAMPLES)[1:]:
            radius = characteristics.layer_radius(coeffs, kind, float(t))
            t_flight = time_of_flight(coeffs, kind, radius)
            max_quadrature = max(
                max_quadrature, abs(characteristics.layer_radius(coeffs, kind, t_flight) - radius) / r
            )

    return {
        "kind": str(kind),
        "layers": radii,
        "horizon": horizon,
        "max_ode_error": max_ode,
        "max_quadrature_error": max_quadrature,
        "ode_steps": steps,
        "ode_rejections": rejections,
        "passed": bool(max_ode <= tolerances.ode and max_quadrature <= tolerances.quadrature),
    }


def verify_scenario(
    profile: InitialProfile,
    scenario: Scenario,
    kinds: Optional[Iterable[KernelKind]] = None,
    n_layers: int = 3,
    t_max: Optional[float] = None,
    tolerances: VerificationTolerances = VerificationTolerances(),
) -> dict:
    """
    Verify the scenario's own kind, or each of `kinds` on the same profile and
    constants. Kinds the profile cannot support (e.g. gravity with eta^2 >= 1)
    are reported as skipped.
    """
    results = []
    for kind in [scenario.kind] if kinds is None else kinds:
        try:
            results.append(verify_kind(profile, scenario.with_kind(kind), n_layers, t_max, tolerances))
        except QuasiRelativismError as error:
            results.append({"kind": str(kind), "skipped": str(error), "passed": True})
        except SelfConsistentError as error:
            results.append({"kind": str(kind), "error": str(error), "passed": False})
        except ArithmeticError as error:
            results.append({"kind": str(kind), "error": f"{type(error).__name__}: {error}", "passed": False})

    return {"passed": all(result["passed"] for result in results), "kinds": results}


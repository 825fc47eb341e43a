"""
Layer trajectories R(t, r) = r * P(t, r), where F(P, y(r)) = lambda(r) * t,
their speeds, and detection of the first crossing of characteristics.
"""

from dataclasses import dataclass
from enum import Enum
import math
import multiprocessing
from typing import Iterable, Optional

import pandas as pd
from scipy import optimize

from cli import constants, kernels
from cli.errors import ConfigError, DomainError, NotApplicableError, PastCollapseError
from cli.kernels import KernelKind
from cli.model import (
    InitialProfile,
    LayerCoefficients,
    Scenario,
    UniformProfile,
    layer_coefficients,
    layer_grid,
    reference_radius,
)


@dataclass(frozen=True)
class LayerTrajectory:
    r0: float
    samples: tuple[tuple[float, float, float], ...]
    asymptote: Optional[float] = None

    def to_frame(self) -> pd.DataFrame:
        frame = pd.DataFrame(self.samples, columns=["t", "R", "beta"])
        frame.insert(1, "r0", self.r0)
        return frame


@dataclass(frozen=True)
class LayerSpeed:
    speed: float
    velocity: float
    beta: float
    beta_algebraic: Optional[float] = None


class ShockKind(str, Enum):
    NONE = "none"
    CAUSTIC = "caustic"
    CENTRAL_COLLAPSE = "central_collapse"


@dataclass(frozen=True)
class LayerScan:
    r: float
    t_zero: Optional[float]
    t_arrival: Optional[float]


@dataclass(frozen=True)
class ShockReport:
    kind: ShockKind
    scan: tuple[tuple[float, Optional[float]], ...] = ()
    t_c: Optional[float] = None
    R_c: Optional[float] = None
    r_star: Optional[float] = None
    t_first: Optional[float] = None
    simultaneous: Optional[bool] = None

    @property
    def first_time(self) -> Optional[float]:
        """
        Time after which the single-stream solution stops describing the flow.
        """
        if self.kind is ShockKind.CAUSTIC:
            return self.t_c
        if self.kind is ShockKind.CENTRAL_COLLAPSE:
            return self.t_first
        return None

    def to_dict(self) -> dict:
        return {
            "kind": self.kind.value,
            "t_c": self.t_c,
            "R_c": self.R_c,
            "r_star": self.r_star,
            "t_first": self.t_first,
            "simultaneous": self.simultaneous,
            "scan": [{"r": r, "t_J0": t_zero} for r, t_zero in self.scan],
        }


@dataclass(frozen=True)
class CollapseTimes:
    T: float
    T_s: float
    T_c: float
    ratio: float
    printed_ratio: float

    def to_dict(self) -> dict:
        return {
            "T": self.T,
            "T_s": self.T_s,
            "T_c": self.T_c,
            "ratio": self.ratio,
            "printed_ratio": self.printed_ratio,
        }


def arrival_time(coeffs: LayerCoefficients, kind: KernelKind) -> float:
    """
    Time at which a collapsing layer reaches the center.
    """
    if kind.is_expansion:
        raise NotApplicableError("expanding layers never reach the center")
    if coeffs.lam == 0.0:
        return math.inf
    y, _ = coeffs.layer_parameter(kind)
    return kernels.collapse_endpoint(kind, y) / coeffs.lam


def _layer_variable(coeffs: LayerCoefficients, kind: KernelKind, t: float) -> float:
    if not (math.isfinite(t) and t >= 0.0):
        raise DomainError(f"time {t!r} must be finite and nonnegative")
    y, _ = coeffs.layer_parameter(kind)
    try:
        return kernels.inverse_map_variable(kind, coeffs.lam * t, y)
    except PastCollapseError as error:
        raise PastCollapseError(error.arrival / coeffs.lam) from error


def layer_radius(coeffs: LayerCoefficients, kind: KernelKind, t: float) -> float:
    return coeffs.r * kernels.ratio_from_variable(kind, _layer_variable(coeffs, kind, t))


def _algebraic_beta(coeffs: LayerCoefficients, kind: KernelKind, u: float) -> Optional[float]:
    if not kind.is_expansion:
        return None

    y, _ = coeffs.layer_parameter(kind)
    if kind.is_sphere:
        kappa = u * u / (1.0 + u * u)
        if not kind.is_relativistic:
            return coeffs.r * coeffs.lam * math.sqrt(kappa) / coeffs.c
    else:
        kappa = u * u
        if not kind.is_relativistic:
            return 2.0 * coeffs.r * coeffs.lam * u / coeffs.c
    return math.sqrt(y) * math.sqrt(kappa * (2.0 + y * kappa)) / (1.0 + y * kappa)


def layer_speed(coeffs: LayerCoefficients, kind: KernelKind, t: float) -> LayerSpeed:
    """
    Speed of the layer at time t, from v = r * lambda / dF/dx at x = P(t).

    `beta_algebraic` is the independent closed-form speed law where one exists
    (EM kinds), for cross-checking.
    """
    u = _layer_variable(coeffs, kind, t)
    y, _ = coeffs.layer_parameter(kind)
    velocity = coeffs.r * coeffs.lam * kernels.ratio_rate(kind, u, y)
    speed = abs(velocity)
    return LayerSpeed(
        speed=speed,
        velocity=velocity,
        beta=speed / coeffs.c,
        beta_algebraic=_algebraic_beta(coeffs, kind, u),
    )


def speed_asymptote(coeffs: LayerCoefficients, kind: KernelKind) -> Optional[float]:
    """
    Limiting speed of an expanding layer: beta for relativistic kinds, v for
    classical ones, None when unbounded (classical cylinder).
    """
    if not kind.is_expansion:
        raise NotApplicableError("collapsing layers have no limiting speed")
    if kind.is_sphere:
        if not kind.is_relativistic:
            return coeffs.r * coeffs.lam
        y = coeffs.eta_sq
        return math.sqrt(y * (2.0 + y)) / (1.0 + y)
    return 1.0 if kind.is_relativistic else None


def eta_from_beta_inf(beta_inf: float) -> tuple[float, float]:
    """
    Invert the limiting speed law: eta^2 = gamma(beta_inf) - 1, and the packing
    ratio n = R0 / r_e = eta that reproduces it.
    """
    if not 0.0 <= beta_inf < 1.0:
        raise DomainError(f"limiting speed ratio {beta_inf!r} outside [0, 1)")
    eta_sq = 1.0 / math.sqrt((1.0 - beta_inf) * (1.0 + beta_inf)) - 1.0
    return eta_sq, math.sqrt(eta_sq)


def beta_inf_from_packing(n: float) -> float:
    if n < 0.0:
        raise DomainError(f"packing ratio {n!r} is negative")
    return n * math.sqrt(2.0 + n * n) / (1.0 + n * n)


def lagrangian_jacobian(coeffs: LayerCoefficients, kind: KernelKind, t: float) -> float:
    """
    dR/dr at fixed t: P + r (lambda' t - y' dF/dy) / (dF/dx).
    """
    u = _layer_variable(coeffs, kind, t)
    if u == 0.0:
        return 1.0
    x = kernels.ratio_from_variable(kind, u)
    if x == 0.0:
        raise PastCollapseError(arrival_time(coeffs, kind))
    y, d_y = coeffs.layer_parameter(kind)
    d_forward_dy = kernels.d_forward_dy_variable(kind, u, y) if d_y != 0.0 else 0.0
    return x + coeffs.r * (coeffs.d_lam * t - d_y * d_forward_dy) * kernels.ratio_rate(kind, u, y)


def layer_trajectory(coeffs: LayerCoefficients, kind: KernelKind, times: Iterable[float]) -> LayerTrajectory:
    """
    Sample (t, R, beta) along one characteristic; collapsing layers stop at the center.
    """
    t_arrival = math.inf if kind.is_expansion else arrival_time(coeffs, kind)
    samples = []
    for t in times:
        if t > t_arrival:
            break
        samples.append((float(t), layer_radius(coeffs, kind, t), layer_speed(coeffs, kind, t).beta))
    asymptote = speed_asymptote(coeffs, kind) if kind.is_expansion else None
    return LayerTrajectory(r0=coeffs.r, samples=tuple(samples), asymptote=asymptote)


def scan_layer(
    profile: InitialProfile,
    scenario: Scenario,
    r: float,
    t_max: float,
    n_steps: int = constants.SHOCK_TIME_STEPS,
) -> LayerScan:
    """
    March the Jacobian of one layer through time and bisect its first zero.
    """
    kind = scenario.kind
    coeffs = layer_coefficients(profile, scenario, r)
    if coeffs.lam == 0.0:
        return LayerScan(r=r, t_zero=None, t_arrival=None if kind.is_expansion else math.inf)

    t_arrival = None if kind.is_expansion else arrival_time(coeffs, kind)
    t_end = t_max if t_arrival is None else min(t_max, t_arrival * (1.0 - constants.ARRIVAL_MARGIN))

    def jacobian(t: float) -> float:
        return lagrangian_jacobian(coeffs, kind, t)

    t_previous = 0.0
    for step in range(1, n_steps + 1):
        t = t_end * step / n_steps
        if jacobian(t) <= 0.0:
            t_zero = optimize.brentq(
                jacobian, t_previous, t, xtol=1e-300, rtol=constants.SHOCK_BISECTION_RTOL, maxiter=500
            )
            return LayerScan(r=r, t_zero=float(t_zero), t_arrival=t_arrival)
        t_previous = t

    return LayerScan(r=r, t_zero=None, t_arrival=t_arrival)


def _refine_caustic(
    profile: InitialProfile,
    scenario: Scenario,
    radii: list[float],
    index: int,
    t_c: float,
    t_max: float,
    n_steps: int,
) -> tuple[float, float]:
    lower, upper = radii[max(index - 1, 0)], radii[min(index + 1, len(radii) - 1)]
    r_star = radii[index]
    if not upper > lower:
        return t_c, r_star

    def first_zero(r: float) -> float:
        t_zero = scan_layer(profile, scenario, r, t_max, n_steps).t_zero
        return 2.0 * t_max if t_zero is None else t_zero

    result = optimize.minimize_scalar(
        first_zero, bounds=(lower, upper), method="bounded", options={"xatol": 1e-10 * r_star}
    )
    if result.fun < t_c:
        return float(result.fun), float(result.x)
    return t_c, r_star


def shock_time(
    profile: InitialProfile,
    scenario: Scenario,
    r_grid: Optional[Iterable[float]] = None,
    t_max: float = 1.0,
    jobs: int = 1,
    n_steps: int = constants.SHOCK_TIME_STEPS,
) -> ShockReport:
    """
    Find the first caustic (crossing of characteristics at R > 0) or, for
    gravity, the collapse of every layer into the center before `t_max`.
    """
    if not (math.isfinite(t_max) and t_max > 0.0):
        raise ConfigError(f"t_max={t_max!r} must be positive")
    kind = scenario.kind
    radii = sorted(float(r) for r in (layer_grid(profile, scenario) if r_grid is None else r_grid))

    tasks = [(profile, scenario, r, t_max, n_steps) for r in radii]
    if jobs > 1:
        with multiprocessing.Pool(jobs) as pool:
            scans = pool.starmap(scan_layer, tasks)
    else:
        scans = [scan_layer(*task) for task in tasks]
    scan = tuple((layer.r, layer.t_zero) for layer in scans)

    zeros = [(layer.t_zero, index) for index, layer in enumerate(scans) if layer.t_zero is not None]
    t_central = None
    if zeros:
        t_c, index = min(zeros)
        t_c, r_star = _refine_caustic(profile, scenario, radii, index, t_c, t_max, n_steps)
        R_c = layer_radius(layer_coefficients(profile, scenario, r_star), kind, t_c)
        if kind.is_expansion or R_c > constants.CENTRAL_COLLAPSE_RADIUS * reference_radius(profile, scenario):
            return ShockReport(kind=ShockKind.CAUSTIC, scan=scan, t_c=t_c, R_c=R_c, r_star=r_star)
        t_central = t_c

    if not kind.is_expansion:
        arrivals = [layer.t_arrival for layer in scans]
        if t_central is not None or all(t_arrival <= t_max for t_arrival in arrivals):
            t_first = min(arrivals + ([t_central] if t_central is not None else []))
            spread = (max(arrivals) - min(arrivals)) / t_first
            return ShockReport(
                kind=ShockKind.CENTRAL_COLLAPSE,
                scan=scan,
                t_first=t_first,
                simultaneous=bool(spread < constants.SIMULTANEITY_SPREAD),
            )

    return ShockReport(kind=ShockKind.NONE, scan=scan)


def collapse_times(profile: UniformProfile, scenario: Scenario) -> CollapseTimes:
    """
    Collapse times of uniform classical dust in both symmetries, with the
    cylinder's cross-sectional density read as rho0 * ell.
    """
    kind = scenario.kind
    if kind.is_expansion or kind.is_relativistic or not isinstance(profile, UniformProfile):
        raise NotApplicableError("collapse times need a uniform classical gravitational scenario")
    if profile.rho0 <= 0.0:
        raise DomainError("collapse time of an empty profile is unbounded")

    volume_density = profile.rho0 if kind.is_sphere else profile.rho0 / scenario.slab_height_ell
    T_s = 0.25 * math.sqrt(3.0 * math.pi / (2.0 * scenario.G * volume_density))
    T_c = 0.5 / math.sqrt(scenario.G * volume_density)
    return CollapseTimes(
        T=T_s if kind.is_sphere else T_c,
        T_s=T_s,
        T_c=T_c,
        ratio=T_s / T_c,
        printed_ratio=math.sqrt(3.0 / 8.0) * math.pi,
    )

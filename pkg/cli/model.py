"""
Scenario constants, initial density profiles, and the per-layer coefficients
that every closed-form solution is parameterized by.

A profile's density is the charge density (EM) or mass density (gravity) in
sphere symmetry, and the cross-sectional density rho*ell in cylinder symmetry.
"""

from dataclasses import dataclass, replace
from functools import cached_property
import math
from typing import ClassVar, Optional, Union
import warnings

import numpy as np
from scipy import interpolate, special

from cli import constants
from cli.errors import ConfigError, DomainError, QuasiRelativismError
from cli.kernels import Interaction, KernelKind, Regime, Symmetry, adaptive_quad


@dataclass(frozen=True)
class Scenario:
    interaction: Interaction
    symmetry: Symmetry
    regime: Regime
    q: float = 1.0
    m: float = 1.0
    c: float = 1.0
    eps0: float = 1.0
    G: float = 1.0
    slab_height_ell: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "interaction", Interaction(self.interaction))
        object.__setattr__(self, "symmetry", Symmetry(self.symmetry))
        object.__setattr__(self, "regime", Regime(self.regime))
        for name in ("m", "c", "eps0", "G", "slab_height_ell"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0.0):
                raise ConfigError(f"{name}={value!r} must be positive and finite")
        if self.interaction is Interaction.EM and not (math.isfinite(self.q) and self.q != 0.0):
            raise ConfigError("an EM scenario needs a nonzero particle charge q")

    @property
    def kind(self) -> KernelKind:
        return KernelKind(self.interaction, self.symmetry, self.regime)

    @property
    def unit(self) -> float:
        """
        Charge (EM) or mass (gravity) carried by one particle.
        """
        return abs(self.q) if self.interaction is Interaction.EM else self.m

    @property
    def geometry_factor(self) -> float:
        return 4.0 * math.pi if self.symmetry is Symmetry.SPHERE else 2.0 * math.pi

    @property
    def coupling(self) -> float:
        """
        K with theta^2(r) = K * integral_0^r rho0(s) s^k ds.
        """
        if self.interaction is Interaction.EM:
            coupling = abs(self.q) / (self.eps0 * self.m)
        else:
            coupling = 4.0 * math.pi * self.G
        if self.symmetry is Symmetry.CYLINDER:
            coupling /= self.slab_height_ell
        return coupling

    def with_regime(self, regime: Regime) -> "Scenario":
        return replace(self, regime=Regime(regime))

    def with_kind(self, kind: KernelKind) -> "Scenario":
        return replace(self, interaction=kind.interaction, symmetry=kind.symmetry, regime=kind.regime)

    def with_light_speed(self, c: float) -> "Scenario":
        return replace(self, c=c)


@dataclass(frozen=True)
class UniformProfile:
    rho0: float
    r_max: float = 1.0

    variant: ClassVar[str] = "uniform"

    def __post_init__(self):
        if not (math.isfinite(self.rho0) and self.rho0 >= 0.0):
            raise ConfigError(f"rho0={self.rho0!r} must be nonnegative")
        if not (math.isfinite(self.r_max) and self.r_max > 0.0):
            raise ConfigError(f"r_max={self.r_max!r} must be positive")

    def density(self, r: float, scenario: Scenario) -> float:
        return self.rho0 if r <= self.r_max else 0.0

    def moment(self, r: float, scenario: Scenario) -> float:
        k = scenario.kind.exponent
        return self.rho0 * min(r, self.r_max) ** (k + 1) / (k + 1)

    def support(self, scenario: Scenario) -> tuple[float, float]:
        return constants.UNIFORM_SUPPORT_FLOOR * self.r_max, self.r_max


@dataclass(frozen=True)
class LogNormalShellProfile:
    """
    Shell whose radial particle distribution is log-normal in tau*r.

    The enclosed count is f0 * Phi((ln(tau r) - mu_r) / sigma_r).
    """

    f0: float
    tau: float
    mu_r: float = 0.0
    sigma_r: float = 0.2

    variant: ClassVar[str] = "log_normal_shell"

    def __post_init__(self):
        if not (math.isfinite(self.f0) and self.f0 >= 0.0):
            raise ConfigError(f"f0={self.f0!r} must be nonnegative")
        if not (math.isfinite(self.tau) and self.tau > 0.0):
            raise ConfigError(f"tau={self.tau!r} must be positive")
        if not (math.isfinite(self.sigma_r) and self.sigma_r > 0.0):
            raise ConfigError(f"sigma_r={self.sigma_r!r} must be positive")
        if not math.isfinite(self.mu_r):
            raise ConfigError("mu_r must be finite")

    def _standard_score(self, r: float) -> float:
        return (math.log(self.tau * r) - self.mu_r) / self.sigma_r

    def density(self, r: float, scenario: Scenario) -> float:
        if r <= 0.0:
            return 0.0
        score = self._standard_score(r)
        normalized = math.exp(-0.5 * score * score) / (math.sqrt(2.0 * math.pi) * self.sigma_r * self.tau * r)
        k = scenario.kind.exponent
        return scenario.unit * self.f0 * self.tau * normalized / (scenario.geometry_factor * r**k)

    def moment(self, r: float, scenario: Scenario) -> float:
        if r <= 0.0:
            return 0.0
        return scenario.unit * self.f0 * float(special.ndtr(self._standard_score(r))) / scenario.geometry_factor

    def support(self, scenario: Scenario) -> tuple[float, float]:
        width = constants.LOG_NORMAL_SUPPORT_WIDTH * self.sigma_r
        return math.exp(self.mu_r - width) / self.tau, math.exp(self.mu_r + width) / self.tau

    def missed_fraction(self, r_min: float, r_max: float) -> float:
        """
        Share of the shell's particles outside [r_min, r_max].
        """
        return float(special.ndtr(self._standard_score(r_min)) + special.ndtr(-self._standard_score(r_max)))


@dataclass(frozen=True)
class TabulatedProfile:
    """
    Density given at nodes, joined by a monotone cubic and held flat out to r_max.
    """

    nodes: tuple[tuple[float, float], ...]
    r_max: float

    variant: ClassVar[str] = "tabulated"

    def __post_init__(self):
        nodes = tuple((float(r), float(value)) for r, value in self.nodes)
        object.__setattr__(self, "nodes", nodes)
        if len(nodes) < 2:
            raise ConfigError("a tabulated profile needs at least two nodes")
        radii = [r for r, _ in nodes]
        values = [value for _, value in nodes]
        if not all(math.isfinite(v) for v in radii + values):
            raise ConfigError("tabulated nodes must be finite")
        if radii[0] < 0.0 or any(b <= a for a, b in zip(radii, radii[1:])):
            raise ConfigError("tabulated radii must be nonnegative and strictly increasing")
        if any(value < 0.0 for value in values):
            raise ConfigError("tabulated densities must be nonnegative")
        if not (math.isfinite(self.r_max) and self.r_max >= radii[-1]):
            raise ConfigError("r_max must not precede the last node")

    @cached_property
    def _interpolator(self) -> interpolate.PchipInterpolator:
        radii, values = zip(*self.nodes)
        return interpolate.PchipInterpolator(radii, values, extrapolate=False)

    def density(self, r: float, scenario: Scenario) -> float:
        first, last = self.nodes[0], self.nodes[-1]
        if r > self.r_max:
            return 0.0
        if r <= first[0]:
            return first[1]
        if r >= last[0]:
            return last[1]
        return max(float(self._interpolator(r)), 0.0)

    def moment(self, r: float, scenario: Scenario) -> float:
        k = scenario.kind.exponent
        upper = min(r, self.r_max)
        if upper <= 0.0:
            return 0.0
        return adaptive_quad(
            lambda s: self.density(s, scenario) * s**k,
            0.0,
            upper,
            points=[node for node, _ in self.nodes],
        )

    def support(self, scenario: Scenario) -> tuple[float, float]:
        first = self.nodes[0][0]
        return (first if first > 0.0 else constants.UNIFORM_SUPPORT_FLOOR * self.r_max), self.r_max


InitialProfile = Union[UniformProfile, LogNormalShellProfile, TabulatedProfile]


@dataclass(frozen=True)
class LayerCoefficients:
    r: float
    N: float
    rho0: float
    theta_sq: float
    beta_bar_sq: float
    eta_sq: Optional[float]
    lam: float
    d_eta_sq: Optional[float]
    d_beta_bar_sq: float
    d_lam: float
    c: float

    def layer_parameter(self, kind: KernelKind) -> tuple[float, float]:
        """
        Kernel parameter y and its radial derivative for this kind.
        """
        if not kind.is_relativistic:
            return 0.0, 0.0
        if kind.is_sphere:
            return self.eta_sq, self.d_eta_sq
        return self.beta_bar_sq, self.d_beta_bar_sq


def reference_radius(profile: InitialProfile, scenario: Scenario) -> float:
    return profile.support(scenario)[1]


def layer_grid(
    profile: InitialProfile,
    scenario: Scenario,
    n_layers: int = constants.DEFAULT_LAYER_COUNT,
    spacing: str = "geometric",
    r_min: Optional[float] = None,
    r_max: Optional[float] = None,
) -> np.ndarray:
    """
    Initial radii spread across the profile support.
    """
    if n_layers < 2:
        raise ConfigError("at least two layers are needed")
    support_min, support_max = profile.support(scenario)
    r_min = support_min if r_min is None else r_min
    r_max = support_max if r_max is None else r_max
    if not 0.0 < r_min < r_max:
        raise ConfigError(f"layer grid bounds ({r_min!r}, {r_max!r}) are not increasing and positive")
    if isinstance(profile, LogNormalShellProfile):
        missed = profile.missed_fraction(r_min, r_max)
        if missed > constants.LOG_NORMAL_MISSED_FRACTION:
            warnings.warn(f"layer grid ({r_min!r}, {r_max!r}) leaves {missed:.2%} of the shell outside")
    if spacing == "geometric":
        return np.geomspace(r_min, r_max, n_layers)
    if spacing == "linear":
        return np.linspace(r_min, r_max, n_layers)
    raise ConfigError(f"unknown grid spacing: {spacing}")


def cumulative_number(profile: InitialProfile, scenario: Scenario, r: float) -> float:
    """
    Number of particles inside radius r; for gravity m*N is the enclosed mass.
    """
    if r < 0.0:
        raise DomainError(f"radius {r!r} is negative")
    return scenario.geometry_factor * profile.moment(r, scenario) / scenario.unit


def _relativistic_sphere_rate(sign: int, y: float, d_y: float, r: float, c: float) -> tuple[float, float]:
    # lam = (c/r) g(y), g = sqrt(y(2 +- y)) / (1 +- y), g' = 1 / (sqrt(y(2 +- y)) (1 +- y)^2)
    if y <= 0.0:
        return 0.0, 0.0
    root = math.sqrt(y * (2.0 + sign * y))
    lam = c * root / (r * (1.0 + sign * y))
    d_g = 1.0 / (root * (1.0 + sign * y) ** 2)
    return lam, -lam / r + c * d_g * d_y / r


def layer_coefficients(profile: InitialProfile, scenario: Scenario, r: float) -> LayerCoefficients:
    if not (math.isfinite(r) and r > 0.0):
        raise DomainError(f"layer radius {r!r} must be positive")

    kind = scenario.kind
    k = kind.exponent
    rho0 = profile.density(r, scenario)
    moment = profile.moment(r, scenario)
    theta_sq = scenario.coupling * moment
    d_theta_sq = scenario.coupling * rho0 * r**k

    if kind.is_relativistic:
        c_sq = scenario.c * scenario.c
        beta_bar_sq, d_beta_bar_sq = theta_sq / c_sq, d_theta_sq / c_sq
    else:
        beta_bar_sq, d_beta_bar_sq = 0.0, 0.0

    if kind.is_sphere:
        eta_sq = beta_bar_sq / r
        d_eta_sq = d_beta_bar_sq / r - eta_sq / r
        if kind.is_relativistic:
            if not kind.is_expansion and eta_sq >= 1.0:
                raise QuasiRelativismError(f"eta^2={eta_sq!r} >= 1 at r={r!r}")
            lam, d_lam = _relativistic_sphere_rate(kind.sign, eta_sq, d_eta_sq, r, scenario.c)
        else:
            lam = math.sqrt(2.0 * theta_sq) / r**1.5
            d_lam = lam * (0.5 * d_theta_sq / theta_sq - 1.5 / r) if theta_sq > 0.0 else 0.0
    else:
        eta_sq, d_eta_sq = None, None
        lam = math.sqrt(0.5 * theta_sq) / r
        d_lam = lam * (0.5 * d_theta_sq / theta_sq - 1.0 / r) if theta_sq > 0.0 else 0.0

    return LayerCoefficients(
        r=r,
        N=scenario.geometry_factor * moment / scenario.unit,
        rho0=rho0,
        theta_sq=theta_sq,
        beta_bar_sq=beta_bar_sq,
        eta_sq=eta_sq,
        lam=lam,
        d_eta_sq=d_eta_sq,
        d_beta_bar_sq=d_beta_bar_sq,
        d_lam=d_lam,
        c=scenario.c,
    )

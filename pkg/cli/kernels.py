"""
Closed-form kernels F(x, y) of the eight self-consistent problems, their
partial derivatives and their inverses.

Every kernel is evaluated in a regular variable u >= 0:

    EM sphere         x = 1 + u^2
    gravity sphere    x = 1 - u^2
    EM cylinder       x = exp(u^2)
    gravity cylinder  x = exp(-u^2)

F is smooth and strictly increasing in u, so near x = 1 nothing cancels and
inversion is a well-conditioned one-dimensional root find on u.
"""

from dataclasses import dataclass
from enum import Enum
import functools
import itertools
import math
from typing import Callable, Optional, Sequence

import numpy as np
from scipy import integrate, optimize, special

from cli import constants
from cli.errors import (
    DomainError,
    NotApplicableError,
    NumericDomainError,
    PastCollapseError,
    QuadratureError,
    QuasiRelativismError,
    SingularityError,
)

SQRT2 = math.sqrt(2.0)
MACHINE_EPS = float(np.finfo(float).eps)


class Interaction(str, Enum):
    EM = "em"
    GRAVITY = "gravity"


class Symmetry(str, Enum):
    SPHERE = "sphere"
    CYLINDER = "cylinder"


class Regime(str, Enum):
    RELATIVISTIC = "relativistic"
    CLASSICAL = "classical"


@dataclass(frozen=True)
class KernelKind:
    interaction: Interaction
    symmetry: Symmetry
    regime: Regime

    @property
    def is_expansion(self) -> bool:
        return self.interaction is Interaction.EM

    @property
    def is_sphere(self) -> bool:
        return self.symmetry is Symmetry.SPHERE

    @property
    def is_relativistic(self) -> bool:
        return self.regime is Regime.RELATIVISTIC

    @property
    def exponent(self) -> int:
        """
        Power of R in the force law and in the density denominator.
        """
        return 2 if self.is_sphere else 1

    @property
    def sign(self) -> int:
        return 1 if self.is_expansion else -1

    def __str__(self) -> str:
        return f"{self.interaction.value}-{self.symmetry.value}-{self.regime.value}"


ALL_KINDS = tuple(
    KernelKind(interaction, symmetry, regime)
    for interaction, symmetry, regime in itertools.product(Interaction, Symmetry, Regime)
)


def erf(u: float) -> float:
    return float(special.erf(u))


def erfinv(v: float) -> float:
    if not -1.0 <= v <= 1.0:
        raise DomainError(f"erfinv argument {v!r} outside [-1, 1]")
    return float(special.erfinv(v))


def arccosh(u: float) -> float:
    """
    arccosh with arguments within the clamp tolerance below one treated as one.
    """
    if u < 1.0:
        if u < 1.0 - constants.CLAMP_TOLERANCE:
            raise NumericDomainError(f"arccosh argument {u!r} < 1")
        u = 1.0
    return float(np.arccosh(u))


def adaptive_quad(
    integrand: Callable[[float], float],
    a: float,
    b: float,
    tol: float = constants.QUAD_TOLERANCE,
    points: Optional[Sequence[float]] = None,
    abs_tol: Optional[float] = None,
) -> float:
    """
    Gauss-Kronrod adaptive quadrature of `integrand` over [a, b].

    `tol` is relative to the integral's size; `abs_tol` (default `tol`) is the
    absolute floor. Raises QuadratureError carrying the best estimate when
    QUADPACK gives up before reaching either.
    """
    if a == b:
        return 0.0
    abs_tol = tol if abs_tol is None else abs_tol
    options = {"epsabs": abs_tol, "epsrel": tol, "limit": constants.QUAD_SUBDIVISION_LIMIT, "full_output": 1}
    if points is not None and math.isfinite(a) and math.isfinite(b):
        options["points"] = [point for point in points if min(a, b) < point < max(a, b)] or None
    result = integrate.quad(integrand, a, b, **options)
    value, error = float(result[0]), float(result[1])
    # a fourth element is QUADPACK's warning message
    if len(result) > 3 and error > max(abs_tol, tol * abs(value)):
        raise QuadratureError(value, error, tol)
    return value


def _arccosh_1p(delta: float) -> float:
    # arccosh(1 + delta)
    return math.log1p(delta + math.sqrt(delta * (delta + 2.0)))


def _clamped_arcsin(v: float) -> float:
    if abs(v) > 1.0:
        if abs(v) > 1.0 + constants.CLAMP_TOLERANCE:
            raise NumericDomainError(f"arcsin argument {v!r} outside [-1, 1]")
        v = math.copysign(1.0, v)
    return math.asin(v)


def _effective_y(kind: KernelKind, y: float) -> float:
    if not kind.is_relativistic:
        return 0.0
    if not math.isfinite(y) or y < 0.0:
        raise DomainError(f"layer parameter y={y!r} must be finite and nonnegative")
    if kind.is_sphere and not kind.is_expansion and y >= 1.0:
        raise QuasiRelativismError(f"eta^2={y!r} >= 1 violates quasi-relativism")
    return y


def variable_from_ratio(kind: KernelKind, x: float) -> float:
    """
    Regular variable u of a radius ratio x = R/R0.
    """
    if kind.is_expansion:
        if not x >= 1.0:
            raise DomainError(f"expansion radius ratio x={x!r} < 1")
    elif not 0.0 <= x <= 1.0:
        raise DomainError(f"collapse radius ratio x={x!r} outside [0, 1]")

    if kind.is_sphere:
        return math.sqrt(abs(x - 1.0))
    if x == 0.0:
        return math.inf
    return math.sqrt(abs(math.log(x)))


def ratio_from_variable(kind: KernelKind, u: float) -> float:
    if kind.is_sphere:
        return 1.0 + u * u if kind.is_expansion else max(1.0 - u * u, 0.0)
    return math.exp(u * u) if kind.is_expansion else math.exp(-u * u)


def _cylinder_integrand(y: float, sign: int) -> Callable[[float], float]:
    return lambda z: SQRT2 * (1.0 + y * z * z) / math.sqrt(2.0 + y * z * z) * math.exp(sign * z * z)


def _cylinder_y_integrand(y: float, sign: int) -> Callable[[float], float]:
    return lambda z: z * z * (3.0 + y * z * z) / (2.0 + y * z * z) ** 1.5 * math.exp(sign * z * z) / SQRT2


def _forward(kind: KernelKind, u: float, y: float) -> float:
    if u == 0.0:
        return 0.0

    if kind.is_sphere:
        if kind.is_expansion:
            return u * math.sqrt(2.0 / (y + 2.0) + u * u) + _arccosh_1p((y + 2.0) * u * u) / ((y + 1.0) * (y + 2.0))
        return u * math.sqrt(max(2.0 / (2.0 - y) - u * u, 0.0)) + 2.0 * _clamped_arcsin(
            u * math.sqrt((2.0 - y) / 2.0)
        ) / ((1.0 - y) * (2.0 - y))

    if not kind.is_relativistic:
        if kind.is_expansion:
            return 0.5 * math.sqrt(math.pi) * float(special.erfi(u))
        return 0.5 * math.sqrt(math.pi) * float(special.erf(u))

    return adaptive_quad(_cylinder_integrand(y, kind.sign), 0.0, u, tol=constants.KERNEL_QUAD_TOLERANCE)


def _d_forward_du(kind: KernelKind, u: float, y: float) -> float:
    if kind.is_sphere:
        x = ratio_from_variable(kind, u)
        if kind.is_expansion:
            return 2.0 * (x + y * u * u) / ((1.0 + y) * math.sqrt(2.0 / (y + 2.0) + u * u))
        root = math.sqrt(max(2.0 / (2.0 - y) - u * u, 0.0))
        if root == 0.0:
            return 0.0
        return 2.0 * (x + y * u * u) / ((1.0 - y) * root)

    return _cylinder_integrand(y, kind.sign)(u)


def ratio_rate(kind: KernelKind, u: float, y: float) -> float:
    """
    dx/dF at the point with regular variable u; zero at u = 0.

    Signed: positive for expansion, negative for collapse.
    """
    y = _effective_y(kind, y)
    if kind.is_sphere:
        x = ratio_from_variable(kind, u)
        if kind.is_expansion:
            return u * (1.0 + y) * math.sqrt(2.0 / (y + 2.0) + u * u) / (x + y * u * u)
        denominator = x + y * u * u
        if denominator == 0.0:
            return -math.inf
        return -u * (1.0 - y) * math.sqrt(max(2.0 / (2.0 - y) - u * u, 0.0)) / denominator

    rate = SQRT2 * u * math.sqrt(2.0 + y * u * u) / (1.0 + y * u * u)
    return rate if kind.is_expansion else -rate


def forward_map_variable(kind: KernelKind, u: float, y: float) -> float:
    return _forward(kind, u, _effective_y(kind, y))


def d_forward_dy_variable(kind: KernelKind, u: float, y: float) -> float:
    y = _effective_y(kind, y)
    if not kind.is_relativistic or u == 0.0:
        return 0.0

    if kind.is_sphere:
        if kind.is_expansion:
            root = math.sqrt(2.0 / (y + 2.0) + u * u)
            return -(y * u / root + (2.0 * y + 3.0) / (1.0 + y) * _arccosh_1p((y + 2.0) * u * u)) / (
                (2.0 + y) ** 2 * (1.0 + y)
            )
        root = math.sqrt(max(2.0 / (2.0 - y) - u * u, 0.0))
        first = -y * u / root if y > 0.0 else 0.0
        angle = 2.0 * _clamped_arcsin(u * math.sqrt((2.0 - y) / 2.0))
        return (first + (3.0 - 2.0 * y) / (1.0 - y) * angle) / ((2.0 - y) ** 2 * (1.0 - y))

    return adaptive_quad(_cylinder_y_integrand(y, kind.sign), 0.0, u, tol=constants.KERNEL_QUAD_TOLERANCE)


def forward_map(kind: KernelKind, x: float, y: float) -> float:
    """
    Dimensionless map value F(x, y) with F = lambda * t on the layer's trajectory.
    """
    return forward_map_variable(kind, variable_from_ratio(kind, x), y)


def d_forward_dx(kind: KernelKind, x: float, y: float) -> float:
    u = variable_from_ratio(kind, x)
    if u == 0.0:
        raise SingularityError("dF/dx is singular at x = 1")
    if not kind.is_expansion and x == 0.0:
        raise SingularityError("dF/dx is singular at x = 0")
    return 1.0 / ratio_rate(kind, u, y)


def d_forward_dy(kind: KernelKind, x: float, y: float) -> float:
    """
    Partial derivative of F in the layer parameter; zero for classical kinds.
    """
    return d_forward_dy_variable(kind, variable_from_ratio(kind, x), y)


@functools.lru_cache(maxsize=4096)
def _collapse_endpoint(kind: KernelKind, y: float) -> float:
    if kind.is_sphere:
        return _forward(kind, 1.0, y)
    if not kind.is_relativistic:
        return 0.5 * math.sqrt(math.pi)
    return adaptive_quad(_cylinder_integrand(y, -1), 0.0, math.inf, tol=constants.KERNEL_QUAD_TOLERANCE)


def collapse_endpoint(kind: KernelKind, y: float) -> float:
    """
    F(0, y): the map value at which a collapsing layer reaches the center.
    """
    if kind.is_expansion:
        raise NotApplicableError("expanding layers never reach an endpoint")
    return _collapse_endpoint(kind, _effective_y(kind, y))


def _variable_limit(kind: KernelKind) -> float:
    if kind.is_sphere and not kind.is_expansion:
        return 1.0
    return math.inf


def _expansion_upper(kind: KernelKind, f_target: float, seed: float) -> float:
    # cylinder F grows like exp(u^2) / u, so u is near sqrt(ln F)
    if kind.is_sphere:
        return max(2.0 * seed, 1.0)
    return max(math.sqrt(math.log1p(2.0 * f_target)), 1.0)


def inverse_map_variable(kind: KernelKind, f_target: float, y: float) -> float:
    """
    Regular variable u with F(u, y) = f_target.

    Safeguarded Newton on a monotone bracket, with Brent's method as the fallback.
    """
    y = _effective_y(kind, y)
    if not math.isfinite(f_target) or f_target < 0.0:
        raise DomainError(f"map value {f_target!r} must be finite and nonnegative")
    if f_target == 0.0:
        return 0.0

    if not kind.is_expansion:
        endpoint = _collapse_endpoint(kind, y)
        if f_target > endpoint * (1.0 + constants.INVERSE_TOLERANCE):
            raise PastCollapseError(endpoint)
        if f_target >= endpoint:
            return _variable_limit(kind)
        if not kind.is_sphere and not kind.is_relativistic:
            return erfinv(2.0 * f_target / math.sqrt(math.pi))

    def residual(u: float) -> float:
        try:
            return _forward(kind, u, y) - f_target
        except OverflowError:
            return math.inf

    def slope(u: float) -> float:
        try:
            return _d_forward_du(kind, u, y)
        except OverflowError:
            return math.inf

    seed = f_target / _d_forward_du(kind, 0.0, y)
    lower = 0.0
    if kind.is_sphere and not kind.is_expansion:
        upper = 1.0
    elif kind.is_expansion:
        upper = _expansion_upper(kind, f_target, seed)
        while residual(upper) < 0.0:
            lower = upper
            upper = upper + 1.0 if not kind.is_sphere else 2.0 * upper
            if not kind.is_sphere and upper > constants.MAX_CYLINDER_EXPANSION_VARIABLE:
                raise DomainError(f"map value {f_target!r} is beyond the representable expansion")
    else:
        upper = max(2.0 * seed, 1.0)
        while residual(upper) < 0.0:
            if upper >= constants.MAX_CYLINDER_COLLAPSE_VARIABLE:
                return upper
            lower, upper = upper, 2.0 * upper

    u = seed if lower < seed < upper else 0.5 * (lower + upper)
    stop = 4.0 * MACHINE_EPS * max(1.0, f_target)
    for _ in range(constants.INVERSE_MAX_ITERATIONS):
        value = residual(u)
        if abs(value) <= stop:
            break
        if value < 0.0:
            lower = u
        else:
            upper = u
        gradient = slope(u)
        candidate = u - value / gradient if 0.0 < gradient < math.inf else math.nan
        if not lower < candidate < upper:
            candidate = 0.5 * (lower + upper)
        if abs(candidate - u) <= 2.0 * MACHINE_EPS * max(1.0, u):
            u = candidate
            break
        u = candidate

    if abs(residual(u)) > constants.INVERSE_TOLERANCE * max(1.0, f_target):
        u = optimize.brentq(residual, lower, upper, xtol=1e-15, rtol=4.0 * MACHINE_EPS, maxiter=200)
    return float(u)


def inverse_map(kind: KernelKind, f_target: float, y: float) -> float:
    """
    Radius ratio x with F(x, y) = f_target.
    """
    return ratio_from_variable(kind, inverse_map_variable(kind, f_target, y))

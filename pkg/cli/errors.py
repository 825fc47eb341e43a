"""
Exceptions raised by the library and mapped to exit codes by the CLI.
"""

from typing import Any, Optional


class SelfConsistentError(Exception):
    """
    Base class for every error raised on purpose by this package.
    """


class ConfigError(SelfConsistentError, ValueError):
    """
    Scenario, profile, or run values violate their invariants.
    """


class DomainError(SelfConsistentError, ValueError):
    """
    An argument lies outside the domain of a kernel or first integral.
    """


class NumericDomainError(DomainError):
    """
    An inverse trigonometric or hyperbolic argument left its domain by more than the clamp tolerance.
    """


class SingularityError(DomainError):
    """
    A derivative was requested at a point where it does not exist.
    """


class QuasiRelativismError(DomainError):
    """
    Gravitational sphere layer with eta^2 >= 1.
    """


class NotApplicableError(SelfConsistentError):
    """
    The operation has no meaning for this kernel kind or profile.
    """


class QuadratureError(SelfConsistentError, ArithmeticError):
    """
    Adaptive quadrature did not reach the requested tolerance.
    """

    def __init__(self, estimate: float, error: float, tol: float):
        self.estimate = estimate
        self.error = error
        self.tol = tol
        super().__init__(f"quadrature error {error:.3e} exceeds tolerance {tol:.3e} (estimate {estimate!r})")


class PastCollapseError(DomainError):
    """
    A gravitational layer was queried after it reached the center.

    `arrival` is the arrival time, or the map value F(0, y) when raised by a kernel.
    """

    def __init__(self, arrival: float):
        self.arrival = arrival
        super().__init__(f"layer reaches the center at {arrival!r}")


class PastShockError(SelfConsistentError):
    """
    The Lagrangian map has already folded at the requested layer and time.
    """

    def __init__(self, jac: float, r: float, t: float):
        self.jac = jac
        self.r = r
        self.t = t
        super().__init__(f"Jacobian {jac!r} <= 0 at r={r!r}, t={t!r}")


class ShockReachedError(SelfConsistentError):
    """
    A requested time lies beyond the first shock of the scenario.
    """

    def __init__(self, report: Any, t_requested: float):
        self.report = report
        self.t_requested = t_requested
        super().__init__(f"shock reached before requested time t={t_requested!r}")


class VerificationError(SelfConsistentError):
    def __init__(self, report: dict, message: Optional[str] = None):
        self.report = report
        super().__init__(message or "oracle verification exceeded its tolerances")

"""
Module holding post-processing of density snapshots and velocity fields:
the quantum potential of a density profile and the linear velocity
coefficient of uniform classical flows.
"""

from dataclasses import dataclass
import math
from typing import Iterable

import numpy as np
import pandas as pd

from cli import characteristics, constants
from cli.density import DensitySnapshot
from cli.errors import DomainError, NotApplicableError, PastShockError
from cli.kernels import Symmetry
from cli.model import Scenario, UniformProfile, layer_coefficients


@dataclass(frozen=True)
class PotentialProfile:
    t: float
    points: tuple[tuple[float, float], ...]
    hbar: float
    low_confidence: tuple[bool, ...]

    def to_frame(self) -> pd.DataFrame:
        frame = pd.DataFrame(self.points, columns=["R", "Q"])
        frame["low_confidence"] = list(self.low_confidence)
        return frame


@dataclass(frozen=True)
class VelocityCoefficient:
    t: float
    b: float
    b_dot: float
    stiffness: float
    potential_coefficient: float


def _radial_laplacian(values: np.ndarray, radii: np.ndarray, k: int) -> np.ndarray:
    first = np.gradient(values, radii, edge_order=2)
    second = np.gradient(first, radii, edge_order=2)
    h1 = radii[1:-1] - radii[:-2]
    h2 = radii[2:] - radii[1:-1]
    second[1:-1] = 2.0 * (
        values[:-2] / (h1 * (h1 + h2)) - values[1:-1] / (h1 * h2) + values[2:] / (h2 * (h1 + h2))
    )
    return second + k / radii * first


def quantum_potential(snapshot: DensitySnapshot, mass: float, hbar: float = constants.HBAR) -> PotentialProfile:
    """
    Q = (hbar^2 / 2m) * Laplacian(sqrt(rho/m)) / sqrt(rho/m) on the snapshot's radii.

    The two outermost points at each end use one-sided stencils and are
    flagged low-confidence.
    """
    if not snapshot.is_single_stream:
        raise PastShockError(min(point.jac for point in snapshot.points), math.nan, snapshot.t)
    if len(snapshot.points) < constants.MIN_INTERIOR_POINTS + 2 * constants.LOW_CONFIDENCE_EDGE:
        raise DomainError("too few points for the quantum potential stencil")
    if mass <= 0.0 or hbar <= 0.0:
        raise DomainError("mass and hbar must be positive")

    radii = np.array([point.R for point in snapshot.points])
    densities = np.array([point.rho for point in snapshot.points])
    if np.any(densities <= 0.0):
        raise DomainError("quantum potential needs a strictly positive density")
    if np.any(np.diff(radii) <= 0.0) or radii[0] <= 0.0:
        raise DomainError("snapshot radii must be positive and strictly increasing")

    amplitude = np.sqrt(densities / mass)
    k = 2 if snapshot.symmetry is Symmetry.SPHERE else 1
    potential = hbar**2 / (2.0 * mass) * _radial_laplacian(amplitude, radii, k) / amplitude

    edge = constants.LOW_CONFIDENCE_EDGE
    low_confidence = [index < edge or index >= len(radii) - edge for index in range(len(radii))]
    return PotentialProfile(
        t=snapshot.t,
        points=tuple(zip(radii.tolist(), potential.tolist())),
        hbar=hbar,
        low_confidence=tuple(low_confidence),
    )


def _check_uniform_classical(profile: UniformProfile, scenario: Scenario):
    if not isinstance(profile, UniformProfile) or scenario.kind.is_relativistic:
        raise NotApplicableError("a linear velocity field needs a uniform classical scenario")


def effective_velocity_coefficient(profile: UniformProfile, scenario: Scenario, t: float) -> VelocityCoefficient:
    """
    b(t) with <v> = +-R b, and the stiffness R^-1 Dv/Dt = +-b' + b^2 that fixes
    the harmonic potential U = potential_coefficient * R^2.
    """
    _check_uniform_classical(profile, scenario)
    kind = scenario.kind
    coeffs = layer_coefficients(profile, scenario, 0.5 * profile.r_max)
    if coeffs.lam == 0.0:
        raise DomainError("an empty profile has no velocity field")

    def coefficient(time: float) -> float:
        return characteristics.layer_speed(coeffs, kind, time).speed / characteristics.layer_radius(coeffs, kind, time)

    h = constants.COEFFICIENT_FD_STEP / coeffs.lam
    t_limit = math.inf if kind.is_expansion else characteristics.arrival_time(coeffs, kind)
    if t < h:
        b_dot = (-3.0 * coefficient(t) + 4.0 * coefficient(t + h) - coefficient(t + 2.0 * h)) / (2.0 * h)
    elif t + h >= t_limit:
        b_dot = (3.0 * coefficient(t) - 4.0 * coefficient(t - h) + coefficient(t - 2.0 * h)) / (2.0 * h)
    else:
        b_dot = (coefficient(t + h) - coefficient(t - h)) / (2.0 * h)

    b = coefficient(t)
    stiffness = kind.sign * b_dot + b * b
    return VelocityCoefficient(
        t=t,
        b=b,
        b_dot=b_dot,
        stiffness=stiffness,
        potential_coefficient=-0.5 * scenario.m * stiffness,
    )


def velocity_field_linearity(profile: UniformProfile, scenario: Scenario, t: float, r_grid: Iterable[float]) -> float:
    """
    Largest deviation of the layer velocities from the best line v = b R,
    relative to the largest speed.
    """
    _check_uniform_classical(profile, scenario)
    kind = scenario.kind
    radii, velocities = [], []
    for r in r_grid:
        coeffs = layer_coefficients(profile, scenario, float(r))
        radii.append(characteristics.layer_radius(coeffs, kind, t))
        velocities.append(characteristics.layer_speed(coeffs, kind, t).velocity)
    radii, velocities = np.array(radii), np.array(velocities)
    scale = np.max(np.abs(velocities))
    if scale == 0.0:
        return 0.0
    slope = np.dot(radii, velocities) / np.dot(radii, radii)
    return float(np.max(np.abs(velocities - slope * radii)) / scale)

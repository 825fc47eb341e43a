"""
Command-line entry-point: run the closed-form solutions of a scenario file and
emit CSV/JSON for plotting and regression.
"""

from dataclasses import dataclass
from enum import Enum
import math
from pathlib import Path
import sys
from typing import Optional
import warnings

import click
import numpy as np
import pandas as pd
from pydantic import ValidationError
import typer
from tqdm import tqdm

from cli import analysis, characteristics, density, oracle, utils
from cli.config import ScenarioFile, load_scenario_file, scenario_schema
from cli.errors import (
    ConfigError,
    NotApplicableError,
    SelfConsistentError,
    ShockReachedError,
    VerificationError,
)
from cli.kernels import ALL_KINDS, Regime
from cli.model import InitialProfile, Scenario, UniformProfile, layer_coefficients

DEFAULT_SNAPSHOT_COUNT = 5
MIN_ANALYSIS_LAYERS = 16

app = typer.Typer(add_completion=False, help="Exact self-consistent Coulomb explosion and gravitational collapse.")


class RegimeFlag(str, Enum):
    rel = "rel"
    classical = "classical"


REGIMES = {RegimeFlag.rel: Regime.RELATIVISTIC, RegimeFlag.classical: Regime.CLASSICAL}

SCENARIO_OPTION = typer.Option(..., "--scenario", help="Scenario JSON file.")
OUT_OPTION = typer.Option(None, "--out", help="Output file; standard output when omitted.")
T_MAX_OPTION = typer.Option(None, "--t-max", help="Override run.t_max.")
LAYERS_OPTION = typer.Option(None, "--layers", help="Override run.n_layers.")
SAMPLES_OPTION = typer.Option(None, "--samples", help="Override run.n_time_samples.")
REGIME_OPTION = typer.Option(None, "--regime", help="Override the scenario regime.")
SEED_OPTION = typer.Option(None, "--seed", help="Reserved; every algorithm is deterministic.")
JOBS_OPTION = typer.Option(None, "--jobs", help="Worker processes for per-layer scans.")


@dataclass(frozen=True)
class RunContext:
    settings: ScenarioFile
    scenario: Scenario
    profile: InitialProfile
    radii: np.ndarray
    t_max: float
    n_samples: int
    jobs: int

    def output_path(self, out: Optional[Path], tag: str, suffix: str = ".csv") -> Optional[Path]:
        return utils.get_output_path(out, self.settings.run.output.path, tag, suffix)


def load_context(
    scenario_path: Path,
    t_max: Optional[float] = None,
    layers: Optional[int] = None,
    samples: Optional[int] = None,
    regime: Optional[RegimeFlag] = None,
    jobs: Optional[int] = None,
) -> RunContext:
    settings = load_scenario_file(scenario_path)
    scenario = settings.scenario.build(REGIMES[regime] if regime is not None else None)
    profile = settings.profile.build()
    t_max = settings.run.t_max if t_max is None else t_max
    if not t_max > 0.0:
        raise ConfigError("--t-max must be positive")
    if layers is not None and layers < 2:
        raise ConfigError("--layers must be at least 2")
    n_samples = settings.run.n_time_samples if samples is None else samples
    if n_samples < 2:
        raise ConfigError("--samples must be at least 2")
    return RunContext(
        settings=settings,
        scenario=scenario,
        profile=profile,
        radii=settings.layer_radii(profile, scenario, layers),
        t_max=t_max,
        n_samples=n_samples,
        jobs=settings.run.jobs if jobs is None else jobs,
    )


def _check_before_shock(context: RunContext, t_latest: float) -> characteristics.ShockReport:
    report = characteristics.shock_time(
        context.profile, context.scenario, context.radii, t_max=t_latest, jobs=context.jobs
    )
    if report.first_time is not None and t_latest >= report.first_time:
        raise ShockReachedError(report, t_latest)
    return report


@app.command("characteristics")
def characteristics_command(
    scenario: Path = SCENARIO_OPTION,
    out: Optional[Path] = OUT_OPTION,
    t_max: Optional[float] = T_MAX_OPTION,
    layers: Optional[int] = LAYERS_OPTION,
    samples: Optional[int] = SAMPLES_OPTION,
    regime: Optional[RegimeFlag] = REGIME_OPTION,
    seed: Optional[int] = SEED_OPTION,
    jobs: Optional[int] = JOBS_OPTION,
):
    """
    Layer radii and speeds on a time grid: columns t, r0, R, beta.
    """
    context = load_context(scenario, t_max, layers, samples, regime, jobs)
    kind = context.scenario.kind
    times = np.linspace(0.0, context.t_max, context.n_samples)
    frames = [
        characteristics.layer_trajectory(layer_coefficients(context.profile, context.scenario, r), kind, times).to_frame()
        for r in tqdm(context.radii, desc="Tracing characteristics", disable=None)
    ]
    frame = pd.concat(frames, ignore_index=True)[["t", "r0", "R", "beta"]]
    utils.save_table(frame, context.output_path(out, "characteristics"))


def _limiting_beta(coeffs, kind) -> float:
    if not kind.is_expansion:
        return math.nan
    asymptote = characteristics.speed_asymptote(coeffs, kind)
    if asymptote is None:
        return math.nan
    return asymptote if kind.is_relativistic else asymptote / coeffs.c


@app.command("velocity")
def velocity_command(
    scenario: Path = SCENARIO_OPTION,
    out: Optional[Path] = OUT_OPTION,
    t_max: Optional[float] = T_MAX_OPTION,
    layers: Optional[int] = LAYERS_OPTION,
    samples: Optional[int] = SAMPLES_OPTION,
    regime: Optional[RegimeFlag] = REGIME_OPTION,
    seed: Optional[int] = SEED_OPTION,
    jobs: Optional[int] = JOBS_OPTION,
):
    """
    Layer speeds against their limits: columns t, r0, beta, beta_inf.
    """
    context = load_context(scenario, t_max, layers, samples, regime, jobs)
    kind = context.scenario.kind
    times = np.linspace(0.0, context.t_max, context.n_samples)
    rows = []
    for r in tqdm(context.radii, desc="Scanning speeds", disable=None):
        coeffs = layer_coefficients(context.profile, context.scenario, r)
        beta_inf = _limiting_beta(coeffs, kind)
        t_arrival = math.inf if kind.is_expansion else characteristics.arrival_time(coeffs, kind)
        for t in times:
            if t >= t_arrival:
                break
            rows.append((float(t), float(r), characteristics.layer_speed(coeffs, kind, float(t)).beta, beta_inf))
    frame = pd.DataFrame(rows, columns=["t", "r0", "beta", "beta_inf"])
    utils.save_table(frame, context.output_path(out, "velocity"))


@app.command("density")
def density_command(
    scenario: Path = SCENARIO_OPTION,
    out: Optional[Path] = OUT_OPTION,
    t_max: Optional[float] = T_MAX_OPTION,
    layers: Optional[int] = LAYERS_OPTION,
    samples: Optional[int] = SAMPLES_OPTION,
    regime: Optional[RegimeFlag] = REGIME_OPTION,
    seed: Optional[int] = SEED_OPTION,
    jobs: Optional[int] = JOBS_OPTION,
):
    """
    Density snapshots: columns t, r0, R, rho, jac, near_caustic.
    """
    context = load_context(scenario, t_max, layers, samples, regime, jobs)
    snapshot_times = context.settings.run.snapshot_times
    if snapshot_times is None or t_max is not None:
        snapshot_times = np.linspace(0.0, context.t_max, DEFAULT_SNAPSHOT_COUNT).tolist()
    _check_before_shock(context, max(snapshot_times))

    frames = [
        density.snapshot(
            context.profile, context.scenario, context.scenario.kind, context.radii, float(t), jobs=context.jobs
        ).to_frame()
        for t in tqdm(snapshot_times, desc="Building snapshots", disable=None)
    ]
    frame = pd.concat(frames, ignore_index=True)[["t", "r0", "R", "rho", "jac", "near_caustic"]]
    utils.save_table(frame, context.output_path(out, "density"))


@app.command("shock")
def shock_command(
    scenario: Path = SCENARIO_OPTION,
    out: Optional[Path] = OUT_OPTION,
    t_max: Optional[float] = T_MAX_OPTION,
    layers: Optional[int] = LAYERS_OPTION,
    regime: Optional[RegimeFlag] = REGIME_OPTION,
    seed: Optional[int] = SEED_OPTION,
    jobs: Optional[int] = JOBS_OPTION,
):
    """
    First caustic or central collapse as a JSON report.
    """
    context = load_context(scenario, t_max, layers, None, regime, jobs)
    report = characteristics.shock_time(
        context.profile, context.scenario, context.radii, t_max=context.t_max, jobs=context.jobs
    )
    utils.save_report(report.to_dict(), context.output_path(out, "shock", ".json"))


@app.command("collapse")
def collapse_command(
    scenario: Path = SCENARIO_OPTION,
    out: Optional[Path] = OUT_OPTION,
    regime: Optional[RegimeFlag] = REGIME_OPTION,
    seed: Optional[int] = SEED_OPTION,
):
    """
    Collapse times of uniform classical dust in both symmetries.
    """
    context = load_context(scenario, regime=regime)
    times = characteristics.collapse_times(context.profile, context.scenario)
    utils.save_report(times.to_dict(), context.output_path(out, "collapse", ".json"))


@app.command("analyze")
def analyze_command(
    scenario: Path = SCENARIO_OPTION,
    out: Optional[Path] = OUT_OPTION,
    t_max: Optional[float] = T_MAX_OPTION,
    layers: Optional[int] = LAYERS_OPTION,
    samples: Optional[int] = SAMPLES_OPTION,
    regime: Optional[RegimeFlag] = REGIME_OPTION,
    seed: Optional[int] = SEED_OPTION,
    jobs: Optional[int] = JOBS_OPTION,
):
    """
    Quantum potential of the snapshot at t_max (R, Q), and for uniform
    classical scenarios the velocity coefficient b(t).
    """
    context = load_context(scenario, t_max, max(layers or 0, MIN_ANALYSIS_LAYERS), samples, regime, jobs)
    _check_before_shock(context, context.t_max)
    kind = context.scenario.kind
    path = context.output_path(out, "analysis")

    snapshot = density.snapshot(context.profile, context.scenario, kind, context.radii, context.t_max, jobs=context.jobs)
    potential = analysis.quantum_potential(snapshot, context.scenario.m, hbar=context.settings.run.hbar)
    utils.save_table(potential.to_frame(), utils.get_tagged_path(path, "quantum"))

    if not isinstance(context.profile, UniformProfile) or kind.is_relativistic:
        warnings.warn("b(t) is only defined for uniform classical scenarios; skipping")
        return

    rows = []
    for t in tqdm(np.linspace(0.0, context.t_max, context.n_samples), desc="Velocity coefficient", disable=None):
        coefficient = analysis.effective_velocity_coefficient(context.profile, context.scenario, float(t))
        rows.append((coefficient.t, coefficient.b, coefficient.b_dot, coefficient.stiffness, coefficient.potential_coefficient))
    frame = pd.DataFrame(rows, columns=["t", "b", "b_dot", "stiffness", "potential_coefficient"])
    utils.save_table(frame, utils.get_tagged_path(path, "coefficient"))


@app.command("verify")
def verify_command(
    scenario: Path = SCENARIO_OPTION,
    out: Optional[Path] = OUT_OPTION,
    t_max: Optional[float] = T_MAX_OPTION,
    layers: Optional[int] = LAYERS_OPTION,
    regime: Optional[RegimeFlag] = REGIME_OPTION,
    all_kinds: bool = typer.Option(False, "--all-kinds", help="Verify all eight kernel kinds on this profile."),
    seed: Optional[int] = SEED_OPTION,
):
    """
    Closed form against direct ODE integration and first-integral quadrature.
    """
    context = load_context(scenario, t_max, None, None, regime, None)
    report = oracle.verify_scenario(
        context.profile,
        context.scenario,
        kinds=ALL_KINDS if all_kinds else None,
        n_layers=layers or context.settings.run.verify_layers,
        t_max=t_max,
        tolerances=context.settings.run.tolerances.build(),
    )
    utils.save_report(report, context.output_path(out, "verify", ".json"))
    if not report["passed"]:
        raise VerificationError(report)


@app.command("schema")
def schema_command(out: Optional[Path] = OUT_OPTION):
    """
    Print the scenario-file JSON schema.
    """
    utils.save_report(scenario_schema(), out)


def run_command(argv: Optional[list[str]] = None) -> int:
    """
    Run one subcommand and map failures to exit codes: 1 invalid configuration,
    2 numeric or domain failure, 3 shock reached before the requested time.
    """
    command = typer.main.get_command(app)
    try:
        command.main(args=argv, prog_name="selfconsistent", standalone_mode=False)
    except ShockReachedError as error:
        typer.echo(utils.report_to_json(error.report.to_dict()), err=True, nl=False)
        return 3
    except (ConfigError, NotApplicableError, ValidationError) as error:
        typer.echo(f"Invalid configuration: {error}", err=True)
        return 1
    except click.ClickException as error:
        error.show()
        return 1
    except VerificationError:
        typer.echo("Verification exceeded its tolerances", err=True)
        return 2
    except SelfConsistentError as error:
        typer.echo(f"Numeric failure: {error}", err=True)
        return 2
    except ArithmeticError as error:
        typer.echo(f"Numeric failure: {type(error).__name__}: {error}", err=True)
        return 2
    return 0


def main():
    sys.exit(run_command(sys.argv[1:]))

"""
Scenario-file models: a scenario, an initial profile, and the run block.
"""

from pathlib import Path
from typing import Annotated, Literal, Optional, Union

import numpy as np
from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    NonNegativeFloat,
    PositiveFloat,
    PositiveInt,
    ValidationError,
    model_validator,
)

from cli import constants
from cli.errors import ConfigError
from cli.kernels import Interaction, Regime, Symmetry
from cli.model import (
    InitialProfile,
    LogNormalShellProfile,
    Scenario,
    TabulatedProfile,
    UniformProfile,
    layer_grid,
)
from cli.oracle import VerificationTolerances


class StrictModel(BaseModel):
    model_config = ConfigDict(extra="forbid")


class ScenarioModel(StrictModel):
    interaction: Interaction
    symmetry: Symmetry
    regime: Regime = Regime.RELATIVISTIC
    q: float = 1.0
    m: PositiveFloat = 1.0
    c: PositiveFloat = 1.0
    eps0: PositiveFloat = 1.0
    G: PositiveFloat = 1.0
    slab_height_ell: PositiveFloat = 1.0

    def build(self, regime: Optional[Regime] = None) -> Scenario:
        values = self.model_dump()
        if regime is not None:
            values["regime"] = regime
        return Scenario(**values)


class UniformModel(StrictModel):
    variant: Literal["uniform"]
    rho0: NonNegativeFloat
    r_max: PositiveFloat = 1.0

    def build(self) -> UniformProfile:
        return UniformProfile(rho0=self.rho0, r_max=self.r_max)


class LogNormalShellModel(StrictModel):
    variant: Literal["log_normal_shell"]
    f0: NonNegativeFloat
    tau: PositiveFloat = 2.0
    mu_r: float = 0.0
    sigma_r: PositiveFloat = 0.2

    def build(self) -> LogNormalShellProfile:
        return LogNormalShellProfile(f0=self.f0, tau=self.tau, mu_r=self.mu_r, sigma_r=self.sigma_r)


class TabulatedModel(StrictModel):
    variant: Literal["tabulated"]
    nodes: list[tuple[float, float]] = Field(min_length=2)
    r_max: PositiveFloat

    def build(self) -> TabulatedProfile:
        return TabulatedProfile(nodes=tuple(tuple(node) for node in self.nodes), r_max=self.r_max)


ProfileModel = Annotated[Union[UniformModel, LogNormalShellModel, TabulatedModel], Field(discriminator="variant")]


class GridModel(StrictModel):
    spacing: Literal["geometric", "linear"] = "geometric"
    r_min: Optional[PositiveFloat] = None
    r_max: Optional[PositiveFloat] = None
    values: Optional[list[PositiveFloat]] = None


class ToleranceModel(StrictModel):
    ode: PositiveFloat = constants.VERIFY_ODE_TOLERANCE
    quadrature: PositiveFloat = constants.VERIFY_QUADRATURE_TOLERANCE
    integration: PositiveFloat = constants.ODE_TOLERANCE

    def build(self) -> VerificationTolerances:
        return VerificationTolerances(ode=self.ode, quadrature=self.quadrature, integration=self.integration)


class OutputModel(StrictModel):
    path: Optional[Path] = None


class RunModel(StrictModel):
    t_max: PositiveFloat = 1.0
    n_layers: int = Field(default=8, ge=2)
    n_time_samples: int = Field(default=50, ge=2)
    r_grid: GridModel = Field(default_factory=GridModel)
    tolerances: ToleranceModel = Field(default_factory=ToleranceModel)
    output: OutputModel = Field(default_factory=OutputModel)
    snapshot_times: Optional[list[NonNegativeFloat]] = None
    hbar: PositiveFloat = 1.0
    jobs: PositiveInt = 1
    verify_layers: int = Field(default=3, ge=1)
    nondimensionalize: bool = True


class ScenarioFile(StrictModel):
    scenario: ScenarioModel
    profile: ProfileModel
    run: RunModel = Field(default_factory=RunModel)

    @model_validator(mode="after")
    def check_explicit_constants(self) -> "ScenarioFile":
        if not self.run.nondimensionalize:
            required = {"q", "m", "c", "eps0", "G"}
            if self.scenario.symmetry is Symmetry.CYLINDER:
                required.add("slab_height_ell")
            missing = sorted(required - self.scenario.model_fields_set)
            if missing:
                raise ValueError(f"dimensional runs need explicit constants: {', '.join(missing)}")
        return self

    def layer_radii(self, profile: InitialProfile, scenario: Scenario, n_layers: Optional[int] = None) -> np.ndarray:
        grid = self.run.r_grid
        if grid.values is not None:
            return np.array(sorted(grid.values))
        return layer_grid(
            profile,
            scenario,
            n_layers=n_layers or self.run.n_layers,
            spacing=grid.spacing,
            r_min=grid.r_min,
            r_max=grid.r_max,
        )


def load_scenario_file(path: Path) -> ScenarioFile:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as error:
        raise ConfigError(f"cannot read scenario file {path}: {error}") from error
    try:
        return ScenarioFile.model_validate_json(text)
    except ValidationError as error:
        raise ConfigError(f"invalid scenario file {path}:\n{error}") from error


def scenario_schema() -> dict:
    return ScenarioFile.model_json_schema()

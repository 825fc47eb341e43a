"""
Run every committed scenario through the CLI and collect the curves behind the figures.
"""

from pathlib import Path

import typer
from tqdm import tqdm

from cli.commands import run_command
from cli.paths import OUTPUT_DIR, SCENARIO_DIR

# subcommands whose output makes sense for each scenario file
FIGURES = {
    "em_sphere_uniform": ["characteristics", "velocity", "density", "verify"],
    "em_sphere_log_normal": ["characteristics", "velocity", "shock"],
    "em_cylinder_uniform": ["characteristics", "velocity", "density"],
    "gravity_sphere_uniform_classical": ["characteristics", "density", "collapse", "shock", "analyze"],
    "gravity_sphere_uniform_relativistic": ["characteristics", "shock", "verify"],
    "gravity_sphere_log_normal": ["characteristics", "shock"],
    "gravity_cylinder_uniform_classical": ["characteristics", "collapse", "analyze"],
    "em_sphere_tabulated": ["characteristics", "shock"],
}
SUFFIXES = {"shock": ".json", "collapse": ".json", "verify": ".json"}


def main(
    scenario_dir: Path = typer.Option(SCENARIO_DIR, help="Folder of scenario JSON files."),
    output_dir: Path = typer.Option(OUTPUT_DIR, help="Folder receiving CSV and JSON outputs."),
    jobs: int = typer.Option(1, help="Worker processes per subcommand."),
):
    """
    Produce the data for every figure; non-zero exit codes are reported and skipped.
    """
    output_dir.mkdir(parents=True, exist_ok=True)
    failures = []
    for scenario_path in tqdm(sorted(scenario_dir.glob("*.json")), desc="Scenarios", disable=None):
        for command in FIGURES.get(scenario_path.stem, ["characteristics"]):
            out = output_dir / f"{scenario_path.stem}_{command}{SUFFIXES.get(command, '.csv')}"
            argv = [command, "--scenario", str(scenario_path), "--out", str(out)]
            if command not in ("collapse", "verify"):
                argv += ["--jobs", str(jobs)]
            code = run_command(argv)
            if code != 0:
                failures.append(f"{scenario_path.stem} {command}: exit {code}")

    for failure in failures:
        typer.echo(failure, err=True)


if "__main__" in __name__:
    typer.run(main)

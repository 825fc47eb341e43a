"""
Functions to write command outputs.
"""

import json
from pathlib import Path
import sys
from typing import Optional

import pandas as pd

from cli import constants


def get_output_path(out: Optional[Path], configured: Optional[Path], tag: str, suffix: str) -> Optional[Path]:
    """
    Return the file a command writes to: --out wins, then the scenario's output
    path tagged with the command name; None means standard output.
    """
    if out is not None:
        return out
    if configured is not None:
        return configured.parent / f"{configured.stem}_{tag}{suffix}"
    return None


def get_tagged_path(path: Optional[Path], tag: str) -> Optional[Path]:
    """
    Return a sibling path for a second output of the same command.
    """
    if path is None:
        return None
    return path.with_name(f"{path.stem}_{tag}{path.suffix or '.csv'}")


def setup_dirs(path: Optional[Path]):
    """
    Make sure the directory holding an output file exists.
    """
    if path is not None:
        path.parent.mkdir(parents=True, exist_ok=True)


def table_to_csv(frame: pd.DataFrame) -> str:
    """
    Render a table as CSV text with full float precision and no index.
    """
    return frame.to_csv(index=False, float_format=constants.CSV_FLOAT_FORMAT, na_rep="nan", lineterminator="\n")


def report_to_json(report: dict) -> str:
    """
    Render a report as indented JSON with sorted keys.
    """
    return json.dumps(report, indent=2, sort_keys=True) + "\n"


def _write(text: str, path: Optional[Path]):
    """
    Write text to the path, or to standard output when there is no path.
    """
    if path is None:
        sys.stdout.write(text)
        return
    setup_dirs(path)
    with open(path, mode="w", encoding="utf-8", newline="\n") as out_file:
        out_file.write(text)


def save_table(frame: pd.DataFrame, path: Optional[Path]):
    """
    Save a table as CSV.
    """
    _write(table_to_csv(frame), path)


def save_report(report: dict, path: Optional[Path]):
    """
    Save a report as JSON.
    """
    _write(report_to_json(report), path)

"""Report assembly and serialization.

Reports are JSON documents validated against the schema shipped in
``data/report_schema.json``; profiles and ladders can additionally be dumped
as CSV (one row per grid point or section size).  Writes are atomic: the
payload goes to a temp file in the target directory first and is then renamed
over the destination.
"""

import csv
import dataclasses
import json
import os
import tempfile
from importlib import resources

import jsonschema
import numpy as np

from . import __version__

SCHEMA_VERSION = "1.0"


def _jsonable(obj):
    """Recursively convert results (dataclasses, numpy, complex) to JSON types."""
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        out = {"type": type(obj).__name__}
        for field in dataclasses.fields(obj):
            out[field.name] = _jsonable(getattr(obj, field.name))
        return out
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (complex, np.complexfloating)):
        z = complex(obj)
        return {"re": z.real, "im": z.imag}
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return float(obj)
    if obj is None or isinstance(obj, str):
        return obj
    return str(obj)


def make_report(scenario_echo: dict, seed: int, operation: str, results,
                wall_time_ms: float) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "tool_version": __version__,
        "scenario": _jsonable(scenario_echo),
        "seed": int(seed),
        "operation": operation,
        "results": _jsonable(results),
        "wall_time_ms": float(wall_time_ms),
    }


def load_schema() -> dict:
    with resources.files("shiftstab").joinpath("data/report_schema.json").open(
            "r", encoding="utf-8") as fh:
        return json.load(fh)


def validate_report(report: dict) -> None:
    jsonschema.validate(instance=report, schema=load_schema())


def _atomic_write_text(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path)) or "."
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_report_json(report: dict, path: str) -> None:
    validate_report(report)
    _atomic_write_text(path, json.dumps(report, indent=2, sort_keys=True) + "\n")


def write_profile_csv(path: str, grid, values) -> None:
    """Columns: t, value (one row per grid point)."""
    rows = ["t,value"]
    for t, v in zip(np.asarray(grid, dtype=float), np.asarray(values, dtype=float)):
        rows.append(f"{t!r},{v!r}")
    _atomic_write_text(path, "\n".join(rows) + "\n")


def write_ladder_csv(path: str, sizes, lambda_mins, lambda_maxes) -> None:
    """Columns: size, lambda_min, lambda_max (one row per section size)."""
    rows = ["size,lambda_min,lambda_max"]
    for n, lo, hi in zip(sizes, lambda_mins, lambda_maxes):
        rows.append(f"{int(n)},{float(lo)!r},{float(hi)!r}")
    _atomic_write_text(path, "\n".join(rows) + "\n")


def write_rows_csv(path: str, header, rows) -> None:
    """Generic CSV with an explicit header; used for suite summaries."""
    directory = os.path.dirname(os.path.abspath(path)) or "."
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(header)
            writer.writerows(rows)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise

"""Run configuration files and structured result reports.

Config files are flat ``key = value`` text: one setting per line, ``#``
comments, keys namespaced by the owning module (``train.c_u``).  Reports are
JSON with a schema_version, the command, a full config echo (seed included),
and command-specific result fields; identical configs reproduce identical
result fields, so timing lives outside ``results``.
"""

from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

SCHEMA_VERSION = 1


class ConfigError(ValueError):
    """Malformed config text, unknown key, or invalid setting value."""


def parse_config(path) -> dict[str, str]:
    """Read a flat key = value file into a string-to-string mapping."""
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"config file not found: {path}")
    settings: dict[str, str] = {}
    for lineno, line in enumerate(path.read_text().splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {line!r}")
        key, value = stripped.split("=", 1)
        key, value = key.strip(), value.strip()
        if not key or not value:
            raise ConfigError(f"{path}:{lineno}: empty key or value")
        if key in settings:
            raise ConfigError(f"{path}:{lineno}: duplicate key {key!r}")
        settings[key] = value
    return settings


def check_known_keys(settings: dict[str, str], namespaces: dict[str, set[str]]) -> None:
    """Reject typos: within each owned namespace only listed keys may appear.

    Keys in foreign namespaces are ignored so one file can drive a pipeline
    of several commands.
    """
    for key in settings:
        prefix, _, name = key.partition(".")
        if not name:
            prefix = ""
        allowed = namespaces.get(prefix)
        if allowed is not None and key not in allowed:
            known = ", ".join(sorted(allowed))
            raise ConfigError(f"unknown setting {key!r}; known here: {known}")


def get_str(settings, key, default=None, choices=None):
    value = settings.get(key, default)
    if value is None:
        raise ConfigError(f"missing required setting {key!r}")
    if choices is not None and value not in choices:
        raise ConfigError(f"{key} must be one of {sorted(choices)}, got {value!r}")
    return value


def get_float(settings, key, default=None):
    raw = settings.get(key)
    if raw is None:
        if default is None:
            raise ConfigError(f"missing required setting {key!r}")
        return float(default)
    try:
        return float(raw)
    except ValueError as exc:
        raise ConfigError(f"{key} must be a number, got {raw!r}") from exc


def get_int(settings, key, default=None):
    raw = settings.get(key)
    if raw is None:
        if default is None:
            raise ConfigError(f"missing required setting {key!r}")
        return int(default)
    try:
        return int(raw)
    except ValueError as exc:
        raise ConfigError(f"{key} must be an integer, got {raw!r}") from exc


def get_float_list(settings, key, default=None):
    """Comma-separated floats; the token ``inf`` is accepted."""
    raw = settings.get(key)
    if raw is None:
        if default is None:
            raise ConfigError(f"missing required setting {key!r}")
        return list(default)
    try:
        return [float(tok) for tok in raw.split(",") if tok.strip() != ""]
    except ValueError as exc:
        raise ConfigError(f"{key} must be comma-separated numbers, got {raw!r}") from exc


def get_int_list(settings, key, default=None):
    raw = settings.get(key)
    if raw is None:
        if default is None:
            raise ConfigError(f"missing required setting {key!r}")
        return list(default)
    try:
        return [int(tok) for tok in raw.split(",") if tok.strip() != ""]
    except ValueError as exc:
        raise ConfigError(f"{key} must be comma-separated integers, got {raw!r}") from exc


def get_path(settings, key):
    value = get_str(settings, key)
    path = Path(value)
    if not path.is_file():
        raise ConfigError(f"{key} points to a missing file: {path}")
    return path


def jsonable(value):
    """Recursively convert numpy scalars/arrays and tuples for json.dump."""
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return [jsonable(v) for v in value.tolist()]
    if isinstance(value, (np.floating, np.integer)):
        return value.item()
    if isinstance(value, float) and math.isnan(value):
        raise ConfigError("refusing to serialize NaN into a report")
    return value


def build_report(command: str, config_echo: dict, results: dict,
                 warnings: list[str] | None = None,
                 timing_seconds: float | None = None) -> dict:
    report = {
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "config": jsonable(config_echo),
        "results": jsonable(results),
        "warnings": list(warnings or []),
    }
    if timing_seconds is not None:
        report["timing_seconds"] = float(timing_seconds)
    return report


def write_report(path, report: dict) -> None:
    Path(path).write_text(json.dumps(report, indent=2, sort_keys=True) + "\n")


def read_report(path) -> dict:
    return json.loads(Path(path).read_text())


def write_csv(path, header: list[str], rows) -> None:
    """Plain delimited series for plotting; floats via repr round-trip."""
    lines = [",".join(header)]
    for row in rows:
        cells = []
        for cell in row:
            if isinstance(cell, (float, np.floating)):
                cells.append(repr(float(cell)))
            else:
                cells.append(str(cell))
        if len(cells) != len(header):
            raise ConfigError(f"csv row width {len(cells)} != header width {len(header)}")
        lines.append(",".join(cells))
    Path(path).write_text("\n".join(lines) + "\n")

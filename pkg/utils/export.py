"""Result table export.

Tables go to stdout by default, or to an explicit path. `--save` writes them
to the data dir's `runs/` folder as `sleperc_<prefix>_<timestamp>.<ext>`.
Every value passes through `format_value`, so equal rows serialize to equal
bytes. The determinism check compares whole files.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
import sys
from datetime import datetime

from constants import APP_NAME
from utils.paths import get_runs_dir


def default_output_path(prefix: str, ext: str) -> str:
    timestamp = datetime.now().strftime("%Y%m%d_%H%M%S")
    return os.path.join(get_runs_dir(), f"{APP_NAME}_{prefix}_{timestamp}.{ext}")


def format_value(value) -> str:
    """Canonical text for one cell: repr for floats, '' for missing."""
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        if math.isnan(value):
            return "nan"
        return repr(float(value))
    return str(value)


def _json_value(value):
    # JSON has no inf/nan literals.
    if isinstance(value, float) and not math.isfinite(value):
        return format_value(value)
    return value


def _write_text(text: str, path: str | None) -> str | None:
    if path is None:
        sys.stdout.write(text)
        sys.stdout.flush()
        return None
    with open(path, "w", encoding="utf-8", newline="") as f:
        f.write(text)
    return path


def render_csv(rows: list[dict], fieldnames: list[str]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=fieldnames, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: format_value(row.get(k)) for k in fieldnames})
    return buf.getvalue()


def render_json(rows: list[dict], fieldnames: list[str]) -> str:
    ordered = [{k: _json_value(row.get(k)) for k in fieldnames} for row in rows]
    return json.dumps(ordered, indent=2) + "\n"


def write_csv(rows: list[dict], fieldnames: list[str], path: str | None = None) -> str | None:
    """Write `rows` as CSV to `path` (stdout when None) and return the path."""
    return _write_text(render_csv(rows, fieldnames), path)


def write_json(rows: list[dict], fieldnames: list[str], path: str | None = None) -> str | None:
    """Write `rows` as a JSON array keyed by column name."""
    return _write_text(render_json(rows, fieldnames), path)

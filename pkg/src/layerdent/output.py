"""CSV and JSON writers for result tables.

Floats are written with 17 significant digits; ``nan`` becomes an empty
CSV cell or a JSON ``null``.
"""

from __future__ import annotations

import csv
import io
import json
import math
import pathlib
import sys
from collections.abc import Mapping, Sequence
from typing import Any, Literal, TextIO

Row = Mapping[str, Any]
Format = Literal["csv", "json"]


def format_value(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return "" if math.isnan(value) else format(value, ".16e")
    return str(value)


def _json_value(value: Any) -> Any:
    if isinstance(value, float) and math.isnan(value):
        return None
    return value


def render_csv(columns: Sequence[str], rows: Sequence[Row]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([format_value(row.get(col)) for col in columns])
    return buf.getvalue()


def render_json(columns: Sequence[str], rows: Sequence[Row]) -> str:
    records = [{col: _json_value(row.get(col)) for col in columns} for row in rows]
    return json.dumps(records, indent=2) + "\n"


def render(columns: Sequence[str], rows: Sequence[Row], fmt: Format) -> str:
    if fmt == "json":
        return render_json(columns, rows)
    return render_csv(columns, rows)


def write_table(
    columns: Sequence[str],
    rows: Sequence[Row],
    fmt: Format = "csv",
    path: pathlib.Path | None = None,
    *,
    stream: TextIO | None = None,
) -> None:
    """Write the table to *path*, or to *stream* (default stdout) when no path is given."""
    text = render(columns, rows, fmt)
    if path is not None:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8")
        return
    (stream or sys.stdout).write(text)

"""CSV/JSON record tables shared by the CLI emitters and readers."""
from __future__ import annotations

import csv
import io
import json
import math
from typing import Any, Iterable, Sequence

FORMATS = ("csv", "json")


def _csv_cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value) if math.isfinite(value) else str(value)
    if isinstance(value, (list, tuple)):
        return " ".join(_csv_cell(v) for v in value)
    return str(value)


def _json_value(value: Any) -> Any:
    if isinstance(value, tuple):
        return [_json_value(v) for v in value]
    if isinstance(value, list):
        return [_json_value(v) for v in value]
    if hasattr(value, "item"):  # numpy scalar
        return value.item()
    return value


def format_table(records: Iterable[dict], columns: Sequence[str], fmt: str = "csv") -> str:
    """Render ``records`` with exactly ``columns`` in order.

    CSV cells: ``None`` is empty, floats use their shortest round-trip repr,
    sequences are space-joined. JSON is a list of objects.
    """
    rows = [{c: r.get(c) for c in columns} for r in records]
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_csv_cell(row[c]) for c in columns])
        return buf.getvalue()
    if fmt == "json":
        return json.dumps([{c: _json_value(row[c]) for c in columns} for row in rows], indent=2) + "\n"
    raise ValueError(f"unknown format {fmt!r}; choose from {FORMATS}")


def read_table(text: str, fmt: str | None = None) -> list[dict]:
    """Parse a table written by :func:`format_table`.

    The format is sniffed from the first non-blank character when ``fmt`` is
    ``None``. CSV cells come back as strings.
    """
    if fmt is None:
        fmt = "json" if text.lstrip().startswith("[") else "csv"
    if fmt == "json":
        data = json.loads(text)
        if not isinstance(data, list):
            raise ValueError("JSON table must be a list of records")
        return data
    if fmt == "csv":
        return list(csv.DictReader(io.StringIO(text)))
    raise ValueError(f"unknown format {fmt!r}; choose from {FORMATS}")


def parse_number(cell: Any) -> float | None:
    """Numeric value of a table cell; empty or missing cells give ``None``."""
    if cell is None or cell == "":
        return None
    return float(cell)


def format_vector(k: Sequence[int]) -> str:
    return ",".join(str(x) for x in k)


def parse_vector(cell: Any) -> tuple[int, ...]:
    if isinstance(cell, (list, tuple)):
        return tuple(int(x) for x in cell)
    return tuple(int(x) for x in str(cell).split(","))

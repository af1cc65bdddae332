"""Tabular experiment reports with deterministic text round trips.

A report is a metadata block (ordered string pairs), a column tuple and
rows of int/float/string cells. Both serializations print floats with 12
significant digits, which makes parse -> emit byte-identical: a %.12g
string parses back to a double that prints the same way again.

CSV layout: ``# key = value`` metadata lines, a header row, data rows.
JSON layout: ``{"metadata": {...}, "columns": [...], "rows": [[...]]}``
emitted by hand so the float format matches the CSV one exactly.
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass, field

from .errors import IoFailure

DEFAULT_TIMESTAMP = "1970-01-01T00:00:00Z"

_INT_RE = re.compile(r"[+-]?\d+\Z")

Cell = int | float | str


def format_float(x: float) -> str:
    return "%.12g" % x


def _format_cell(cell: Cell) -> str:
    if isinstance(cell, bool):
        raise TypeError("boolean cells are ambiguous; use 0/1 or a string")
    if isinstance(cell, int):
        return str(cell)
    if isinstance(cell, float):
        return format_float(cell)
    if "," in cell or "\n" in cell:
        raise ValueError(f"cell {cell!r} not representable in csv")
    return cell


def _parse_cell(text: str) -> Cell:
    if _INT_RE.match(text):
        return int(text)
    try:
        return float(text)
    except ValueError:
        return text


@dataclass
class Report:
    metadata: dict[str, str] = field(default_factory=dict)
    columns: tuple[str, ...] = ()
    rows: list[tuple[Cell, ...]] = field(default_factory=list)

    def add_row(self, *cells: Cell) -> None:
        if len(cells) != len(self.columns):
            raise ValueError(f"expected {len(self.columns)} cells, got {len(cells)}")
        self.rows.append(tuple(cells))

    def column(self, name: str) -> list[Cell]:
        k = self.columns.index(name)
        return [row[k] for row in self.rows]


def new_report(kind: str, timestamp: str | None = None, **metadata: str) -> Report:
    meta = {"kind": kind, "timestamp": timestamp or DEFAULT_TIMESTAMP}
    meta.update(metadata)
    return Report(metadata=meta)


def to_csv(report: Report) -> str:
    lines = [f"# {k} = {v}" for k, v in report.metadata.items()]
    lines.append(",".join(report.columns))
    for row in report.rows:
        lines.append(",".join(_format_cell(c) for c in row))
    return "\n".join(lines) + "\n"


def _json_cell(cell: Cell) -> str:
    if isinstance(cell, str):
        return json.dumps(cell)
    if isinstance(cell, float):
        if math.isnan(cell):
            return "NaN"
        if math.isinf(cell):
            return "Infinity" if cell > 0 else "-Infinity"
        return format_float(cell)
    return str(cell)


def to_json(report: Report) -> str:
    meta = ",\n".join(f"    {json.dumps(k)}: {json.dumps(v)}"
                      for k, v in report.metadata.items())
    cols = ", ".join(json.dumps(c) for c in report.columns)
    rows = ",\n".join("    [" + ", ".join(_json_cell(c) for c in row) + "]"
                      for row in report.rows)
    return ("{\n  \"metadata\": {\n" + meta + "\n  },\n"
            "  \"columns\": [" + cols + "],\n"
            "  \"rows\": [\n" + rows + "\n  ]\n}\n")


def report_to_text(report: Report, format: str) -> str:
    if format == "csv":
        return to_csv(report)
    if format == "json":
        return to_json(report)
    raise ValueError(f"unknown report format {format!r}")


def report_from_text(text: str) -> Report:
    if text.lstrip().startswith("{"):
        data = json.loads(text)
        rows = [tuple(int(c) if isinstance(c, int) else c for c in row)
                for row in data["rows"]]
        return Report(metadata=dict(data["metadata"]),
                      columns=tuple(data["columns"]), rows=rows)
    metadata: dict[str, str] = {}
    columns: tuple[str, ...] | None = None
    rows: list[tuple[Cell, ...]] = []
    for line in text.splitlines():
        if not line:
            continue
        if line.startswith("#"):
            key, _, value = line[1:].partition("=")
            metadata[key.strip()] = value.strip()
        elif columns is None:
            columns = tuple(line.split(","))
        else:
            rows.append(tuple(_parse_cell(c) for c in line.split(",")))
    if columns is None:
        raise ValueError("report has no header row")
    return Report(metadata=metadata, columns=columns, rows=rows)


def emit_report(report: Report, format: str, path) -> None:
    text = report_to_text(report, format)
    try:
        with open(path, "w") as fh:
            fh.write(text)
    except OSError as exc:
        raise IoFailure(f"cannot write report to {path}: {exc}") from exc


def parse_report(path) -> Report:
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise IoFailure(f"cannot read report from {path}: {exc}") from exc
    return report_from_text(text)

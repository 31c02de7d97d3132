"""Writers for '#'-headed CSV tables (gnuplot reads them as-is) and JSON."""
from __future__ import annotations

import json
from enum import Enum
from pathlib import Path

import numpy as np


def _cell(value):
    if isinstance(value, Enum):
        return str(value.value)
    if isinstance(value, (bool, np.bool_)):
        return "1" if value else "0"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def _plain(value):
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, dict):
        return {k: _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    return value


def _prepared(path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    return path


def header_lines(title: str, params: dict) -> list[str]:
    lines = [f"# {title}"]
    lines += [f"# {key} = {_cell(params[key])}" for key in sorted(params)]
    return lines


def write_table(path, columns, rows, params: dict, title: str, fmt: str = "csv") -> Path:
    """Write ``rows`` (sequences matching ``columns``).

    CSV files start with '#' lines holding ``params`` and the column names.
    JSON files hold ``{"title", "parameters", "columns", "rows"}``.
    """
    path = _prepared(path)
    if fmt == "json":
        path = path.with_suffix(".json")
        doc = {"title": title, "parameters": _plain(params), "columns": list(columns),
               "rows": [dict(zip(columns, _plain(list(r)))) for r in rows]}
        path.write_text(json.dumps(doc, indent=1, sort_keys=True) + "\n")
        return path
    path = path.with_suffix(".csv")
    lines = header_lines(title, params)
    lines.append("# columns: " + ",".join(columns))
    lines += [",".join(_cell(v) for v in row) for row in rows]
    path.write_text("\n".join(lines) + "\n")
    return path


def write_matrix(path, row_values, col_values, matrix, params: dict, title: str,
                 row_name: str, col_name: str, fmt: str = "csv") -> Path:
    """Grid data in gnuplot's nonuniform-matrix layout.

    First data line: the column count followed by the column coordinates;
    every further line: a row coordinate followed by that row of values.
    """
    path = _prepared(path)
    if fmt == "json":
        path = path.with_suffix(".json")
        doc = {"title": title, "parameters": _plain(params), row_name: _plain(row_values),
               col_name: _plain(col_values), "values": _plain(np.asarray(matrix))}
        path.write_text(json.dumps(doc, sort_keys=True) + "\n")
        return path
    path = path.with_suffix(".csv")
    lines = header_lines(title, params)
    lines.append(f"# layout: nonuniform matrix, rows = {row_name}, columns = {col_name}")
    lines.append(",".join([str(len(col_values))] + [_cell(c) for c in col_values]))
    for r, values in zip(row_values, matrix):
        lines.append(",".join([_cell(r)] + [_cell(v) for v in values]))
    path.write_text("\n".join(lines) + "\n")
    return path


def write_json(path, doc) -> Path:
    path = _prepared(path)
    path.write_text(json.dumps(_plain(doc), indent=1, sort_keys=True) + "\n")
    return path


def read_table(path):
    """Read a CSV written by :func:`write_table` into ``(columns, rows)``."""
    columns, rows = None, []
    for line in Path(path).read_text().splitlines():
        if line.startswith("# columns: "):
            columns = line[len("# columns: "):].split(",")
        elif line and not line.startswith("#"):
            rows.append(line.split(","))
    return columns, rows

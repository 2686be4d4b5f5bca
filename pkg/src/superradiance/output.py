"""Flat-file output with a JSON front-matter header.

CSV files look like::

    ---
    {"command": "scan", "config": {...}, "version": "...", "units": {...}}
    ---
    N,n_1d,d_max,crossings
    100,10,0.589...,"[0.589...]"

JSON files hold ``{"header": ..., "rows": [...]}``. Floats are written with
``repr`` so they round-trip exactly.
"""

from __future__ import annotations

import csv
import io
import json
from pathlib import Path

from . import __version__

UNITS = {"length": "lambda0 (resonant wavelength)", "rate": "Gamma0 (single-atom decay rate)",
         "wavevector": "k0 = 2*pi/lambda0 = 2*pi"}
FENCE = "---"


def make_header(command: str, config: dict, columns, extra: dict | None = None) -> dict:
    header = {
        "command": command,
        "version": __version__,
        "units": UNITS,
        "config": config,
        "columns": list(columns),
    }
    if extra:
        header.update(extra)
    return header


def _cell(value):
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, (list, tuple, dict)):
        return json.dumps(value)
    return value


def dumps(header: dict, rows, fmt: str = "csv") -> str:
    rows = list(rows)
    if fmt == "json":
        cols = header["columns"]
        return json.dumps({"header": header, "rows": [dict(zip(cols, r)) for r in rows]}, indent=1) + "\n"
    if fmt != "csv":
        raise ValueError(f"unknown format {fmt!r}")
    buf = io.StringIO()
    buf.write(FENCE + "\n")
    buf.write(json.dumps(header, sort_keys=True) + "\n")
    buf.write(FENCE + "\n")
    writer = csv.writer(buf, lineterminator="\r\n")
    writer.writerow(header["columns"])
    for row in rows:
        writer.writerow([_cell(v) for v in row])
    return buf.getvalue()


def write(path, header: dict, rows, fmt: str = "csv") -> Path:
    path = Path(path)
    if path.parent and not path.parent.exists():
        path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dumps(header, rows, fmt), newline="")
    return path


def read(path) -> tuple:
    """Return (header, rows) from a file written by :func:`write`.

    CSV cells are returned as strings; JSON rows as dicts.
    """
    text = Path(path).read_text()
    if text.lstrip().startswith("{"):
        blob = json.loads(text)
        return blob["header"], blob["rows"]
    lines = text.splitlines()
    if not lines or lines[0].strip() != FENCE:
        raise ValueError(f"{path}: missing front-matter header")
    end = next(i for i in range(1, len(lines)) if lines[i].strip() == FENCE)
    header = json.loads("\n".join(lines[1:end]))
    reader = csv.DictReader(io.StringIO("\n".join(lines[end + 1:])))
    return header, list(reader)


def read_header(path) -> dict:
    return read(path)[0]

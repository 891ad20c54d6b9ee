"""Deterministic CSV / JSON emission of result records."""

from __future__ import annotations

import csv
import io
import json
import math
import sys
from typing import Iterable, Sequence

from .errors import IoError


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return format(v, ".17g")
    return str(v)


def _jsonable(v):
    if isinstance(v, float) and not math.isfinite(v):
        return str(v)
    if isinstance(v, dict):
        return {k: _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if hasattr(v, "item"):
        return _jsonable(v.item())
    return v


def render(rows: Sequence[dict] | dict, fmt: str, fieldnames: Iterable[str] | None = None) -> str:
    if fmt == "json":
        return json.dumps(_jsonable(rows), indent=2) + "\n"
    if fmt != "csv":
        raise ValueError(f"unknown format {fmt!r}")
    if isinstance(rows, dict):
        rows = [rows]
    if fieldnames is None:
        fieldnames = list(rows[0]) if rows else []
    fieldnames = list(fieldnames)
    keys = set(fieldnames)
    for row in rows:
        if set(row) != keys:
            raise ValueError("rows do not share a common schema")
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\r\n")
    writer.writerow(fieldnames)
    for row in rows:
        writer.writerow([_cell(_jsonable(row[k])) for k in fieldnames])
    return buf.getvalue()


def emit_results(
    rows: Sequence[dict] | dict,
    fmt: str = "csv",
    path: str | None = None,
    fieldnames: Iterable[str] | None = None,
) -> None:
    """Write ``rows`` as CSV (header + RFC 4180 quoting) or a JSON array to ``path`` or stdout."""
    text = render(rows, fmt, fieldnames)
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    try:
        with open(path, "w", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc}") from None

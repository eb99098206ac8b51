"""CSV and key=value text helpers with byte-stable float formatting.

Floats are written with 17 significant digits (round-trip exact), ``.`` as
decimal separator and ``\\n`` line endings.
"""
from __future__ import annotations

import csv
import io
import math

import numpy as np

from .errors import InputFormatError


def format_float(x) -> str:
    return format(float(x), ".17g")


def format_value(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return str(bool(v)).lower()
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return format_float(v)
    return str(v)


def rows_to_csv(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([format_value(v) for v in row])
    return buf.getvalue()


def key_value_text(items) -> str:
    return "".join(f"{k}={format_value(v)}\n" for k, v in items)


def write_text(path, text: str) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        fh.write(text)


def read_table(path):
    """Return ``(header, rows)`` of a CSV file, rows as lists of strings."""
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            reader = csv.reader(fh)
            header = [h.strip() for h in next(reader, [])]
            rows = [r for r in reader if r and any(c.strip() for c in r)]
    except (OSError, UnicodeDecodeError, csv.Error) as exc:
        raise InputFormatError(f"{path}: cannot read ({exc})") from exc
    if not header:
        raise InputFormatError(f"{path}: empty file")
    return header, rows


def parse_columns(path, header, rows, kinds):
    """Convert ``rows`` column-wise with the callables in ``kinds``."""
    cols = [[] for _ in kinds]
    for lineno, row in enumerate(rows, start=2):
        if len(row) != len(kinds):
            raise InputFormatError(f"{path}:{lineno}: expected {len(kinds)} fields, got {len(row)}")
        for col, kind, cell in zip(cols, kinds, row):
            try:
                value = kind(cell.strip())
            except ValueError as exc:
                raise InputFormatError(f"{path}:{lineno}: bad value {cell!r}") from exc
            if isinstance(value, float) and not math.isfinite(value):
                raise InputFormatError(f"{path}:{lineno}: non-finite value {cell!r}")
            col.append(value)
    return cols


def read_series_csv(path) -> np.ndarray:
    """Read a single-column series with header ``x``."""
    header, rows = read_table(path)
    if header != ["x"]:
        raise InputFormatError(f"{path}: expected header 'x', got {','.join(header)}")
    (values,) = parse_columns(path, header, rows, [float])
    if len(values) < 2:
        raise InputFormatError(f"{path}: a series needs at least two samples")
    return np.asarray(values, dtype=float)

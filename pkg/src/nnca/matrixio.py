"""Matrix file parsing and report serialization.

Matrix files are comma-delimited numeric text: one line per dimension
(row), one field per observation (column), no header unless requested.
Matrices are written with 17 significant digits so write-then-parse
round-trips exactly.
"""

import json
import os

import numpy as np

from .linalg import as_matrix


class MatrixParseError(ValueError):
    """Malformed matrix file; message carries line/field position."""


def parse_matrix(path, *, header=False, delimiter=","):
    """Parse a delimited numeric file into a (rows, cols) float matrix."""
    with open(path, "r", encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    start = 0
    if header:
        if not lines:
            raise MatrixParseError(f"{path}: empty file")
        start = 1
    rows = []
    width = None
    for lineno, line in enumerate(lines[start:], start=start + 1):
        if not line.strip():
            continue
        fields = [f.strip() for f in line.split(delimiter)]
        if width is None:
            width = len(fields)
        elif len(fields) != width:
            raise MatrixParseError(
                f"{path}:{lineno}: expected {width} fields, got {len(fields)}"
            )
        row = []
        for col, tok in enumerate(fields, start=1):
            try:
                row.append(float(tok))
            except ValueError:
                raise MatrixParseError(
                    f"{path}:{lineno}: field {col}: not a number: {tok!r}"
                ) from None
        rows.append(row)
    if not rows:
        raise MatrixParseError(f"{path}: no data rows")
    try:
        return as_matrix(rows)
    except ValueError as exc:
        raise MatrixParseError(f"{path}: {exc}") from None


def format_matrix(m, *, delimiter=","):
    m = as_matrix(m)
    return (
        "\n".join(
            delimiter.join(format(v, ".17g") for v in row) for row in m
        )
        + "\n"
    )


def write_matrix(path, m, *, delimiter=","):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(format_matrix(m, delimiter=delimiter))


def write_json(path, payload):
    """Serialize a report dict deterministically (sorted keys)."""
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, sort_keys=True, indent=2)
        fh.write("\n")


def write_text(path, text):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def ensure_dir(path):
    os.makedirs(path, exist_ok=True)
    return path

"""
Distribution file formats
=========================

Joints and encoders are stored either as CSV or JSON; the suffix picks the
codec.

CSV:
    first row      corner cell, then the column labels (y or t)
    other rows     row label (x), then one probability per column

JSON:
    {"x_labels": [...], "y_labels": [...], "p": [[...], ...]}     joint
    {"x_labels": [...], "t_labels": [...], "q": [[...], ...]}     encoder

Probabilities are written as the shortest text that parses back to the same
float, so a parse → write cycle reproduces the file byte for byte. Result
files elsewhere use ``format_number`` with a fixed digit count.
"""

from __future__ import annotations

import csv
import io
import json
import math
from pathlib import Path
from typing import Any, Final

import numpy as np
from numpy.typing import NDArray

from ibplane.core.distributions import Encoder, JointXY
from ibplane.errors import InvalidInputError, ParseError

DEFAULT_DIGITS: Final[int] = 12
CORNER_CELL: Final[str] = "x\\y"
ENCODER_CORNER_CELL: Final[str] = "x\\t"


def format_number(value: float, digits: int | None = DEFAULT_DIGITS) -> str:
    """Render *value* with *digits* significant digits ("inf"/"nan" kept literal).

    ``digits=None`` gives the shortest text that parses back to the same float.
    """
    if math.isnan(value):
        return "nan"
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    text = repr(float(value)) if digits is None else f"{value:.{digits}g}"
    return "0" if text == "-0" else text


# ---------------------------------------------------------------------------
# CSV helpers
# ---------------------------------------------------------------------------

def _parse_matrix_csv(
    text: str, path: Path | str | None
) -> tuple[list[str], list[str], NDArray[np.float64]]:
    rows = [r for r in csv.reader(io.StringIO(text)) if any(cell.strip() for cell in r)]
    if len(rows) < 2:
        raise ParseError("expected a header row and at least one data row", path)
    header = [c.strip() for c in rows[0]]
    col_labels = header[1:]
    if not col_labels:
        raise ParseError("header row has no column labels", path, row=1)
    row_labels: list[str] = []
    values: list[list[float]] = []
    for r, row in enumerate(rows[1:], start=2):
        if len(row) != len(header):
            raise ParseError(f"expected {len(header)} cells, found {len(row)}", path, row=r)
        row_labels.append(row[0].strip())
        parsed: list[float] = []
        for c, cell in enumerate(row[1:], start=2):
            try:
                v = float(cell)
            except ValueError:
                raise ParseError(f"not a number: {cell.strip()!r}", path, row=r, column=c) from None
            if not math.isfinite(v) or v < 0:
                raise ParseError(f"probability must be finite and >= 0, got {v!r}", path, row=r, column=c)
            parsed.append(v)
        values.append(parsed)
    return row_labels, col_labels, np.asarray(values, dtype=np.float64)


def _matrix_csv(
    corner: str,
    row_labels: tuple[str, ...],
    col_labels: tuple[str, ...],
    matrix: NDArray[np.float64],
    digits: int | None,
) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow([corner, *col_labels])
    for label, row in zip(row_labels, matrix):
        writer.writerow([label, *(format_number(float(v), digits) for v in row)])
    return buf.getvalue()


# ---------------------------------------------------------------------------
# JSON helpers
# ---------------------------------------------------------------------------

def _parse_json(text: str, path: Path | str | None) -> dict[str, Any]:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", path, row=exc.lineno, column=exc.colno) from None
    if not isinstance(data, dict):
        raise ParseError("top-level JSON value must be an object", path)
    return data


def _json_matrix(data: dict[str, Any], key: str, path: Path | str | None) -> NDArray[np.float64]:
    raw = data.get(key)
    if not isinstance(raw, list) or not raw:
        raise ParseError(f"missing or empty matrix {key!r}", path)
    width = None
    for r, row in enumerate(raw, start=1):
        if not isinstance(row, list):
            raise ParseError(f"{key} row is not a list", path, row=r)
        width = len(row) if width is None else width
        if len(row) != width:
            raise ParseError(f"{key} row has {len(row)} entries, expected {width}", path, row=r)
        for c, v in enumerate(row, start=1):
            if isinstance(v, bool) or not isinstance(v, (int, float)) or v < 0:
                raise ParseError(f"invalid probability {v!r}", path, row=r, column=c)
    return np.asarray(raw, dtype=np.float64)


def _labels(data: dict[str, Any], key: str) -> list[str] | None:
    raw = data.get(key)
    if raw is None:
        return None
    return [str(v) for v in raw]


# ---------------------------------------------------------------------------
# Public API
# ---------------------------------------------------------------------------

def _is_json(path: Path) -> bool:
    return path.suffix.lower() == ".json"


def parse_joint(text: str, fmt: str = "csv", path: Path | str | None = None) -> JointXY:
    """Decode a joint from CSV or JSON text."""
    try:
        if fmt == "json":
            data = _parse_json(text, path)
            p = _json_matrix(data, "p", path)
            return JointXY.from_matrix(p, _labels(data, "x_labels"), _labels(data, "y_labels"))
        x_labels, y_labels, p = _parse_matrix_csv(text, path)
        return JointXY.from_matrix(p, x_labels, y_labels)
    except ParseError:
        raise
    except InvalidInputError as exc:
        raise ParseError(str(exc), path) from exc


def read_joint(path: Path | str) -> JointXY:
    """Load a joint from *path* (``.json`` → JSON, anything else → CSV)."""
    p = Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read file: {exc.strerror}", p) from exc
    return parse_joint(text, "json" if _is_json(p) else "csv", p)


def joint_to_text(joint: JointXY, fmt: str = "csv", digits: int | None = None) -> str:
    if fmt == "json":
        payload = {
            "x_labels": list(joint.x_labels),
            "y_labels": list(joint.y_labels),
            "p": [[float(format_number(float(v), digits)) for v in row] for row in joint.p],
        }
        return json.dumps(payload, indent=2) + "\n"
    return _matrix_csv(CORNER_CELL, joint.x_labels, joint.y_labels, joint.p, digits)


def write_joint(joint: JointXY, path: Path | str, digits: int | None = None) -> Path:
    p = Path(path)
    p.write_text(joint_to_text(joint, "json" if _is_json(p) else "csv", digits), encoding="utf-8")
    return p


def encoder_payload(
    enc: Encoder, x_labels: tuple[str, ...] | None = None, digits: int | None = None
) -> dict[str, Any]:
    """JSON-ready mapping for an encoder."""
    labels = x_labels or tuple(f"x{i}" for i in range(enc.n_in))
    return {
        "x_labels": list(labels),
        "t_labels": list(enc.t_labels),
        "q": [[float(format_number(float(v), digits)) for v in row] for row in enc.q],
    }


def encoder_to_text(
    enc: Encoder,
    fmt: str = "csv",
    x_labels: tuple[str, ...] | None = None,
    digits: int | None = None,
) -> str:
    if fmt == "json":
        return json.dumps(encoder_payload(enc, x_labels, digits), indent=2) + "\n"
    labels = x_labels or tuple(f"x{i}" for i in range(enc.n_in))
    return _matrix_csv(ENCODER_CORNER_CELL, labels, enc.t_labels, enc.q, digits)


def write_encoder(
    enc: Encoder,
    path: Path | str,
    x_labels: tuple[str, ...] | None = None,
    digits: int | None = None,
) -> Path:
    p = Path(path)
    p.write_text(encoder_to_text(enc, "json" if _is_json(p) else "csv", x_labels, digits), encoding="utf-8")
    return p


def read_encoder(path: Path | str) -> Encoder:
    """Load an encoder; rows must each sum to 1."""
    p = Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read file: {exc.strerror}", p) from exc
    try:
        if _is_json(p):
            data = _parse_json(text, p)
            q = _json_matrix(data, "q", p)
            t_labels = _labels(data, "t_labels")
            return Encoder(q, tuple(t_labels) if t_labels else ())
        _, t_labels_csv, q = _parse_matrix_csv(text, p)
        return Encoder(q, tuple(t_labels_csv))
    except ParseError:
        raise
    except InvalidInputError as exc:
        raise ParseError(str(exc), p) from exc

"""β scans: one independent solve per grid point.

The scan driver fans per-β solves out to a process pool and collects them by
grid index, so results come back in grid order however the workers finish.
A point that raises is recorded as ``PointStatus.FAILED`` and the scan goes
on.

Usage:
    result = scan(joint, Objective.SQUARED_IB, beta_grid(0.1, 5, 15, log=True), cfg)
    write_scan_csv(result, "plane.csv")
"""

from __future__ import annotations

import csv
import io
import json
import logging
import math
import time
from collections.abc import Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Final

import numpy as np

from ibplane.config import get_config
from ibplane.core.distributions import JointXY, Objective
from ibplane.core.formats import encoder_payload, format_number
from ibplane.errors import IbplaneError, InvalidInputError, ParseError
from ibplane.solvers.protocol import PointStatus, ScanPoint, ScanResult, SolverConfig
from ibplane.solvers.restarts import derive_seeds
from ibplane.solvers.runner import solve

logger = logging.getLogger("ibplane.solvers.scan")

SCAN_COLUMNS: Final[tuple[str, ...]] = (
    "beta", "i_xt", "i_yt", "h_t", "objective",
    "iterations", "converged", "restart_index", "status",
)


# ---------------------------------------------------------------------------
# Grids
# ---------------------------------------------------------------------------

def beta_grid(lo: float, hi: float, n: int, log: bool = False) -> list[float]:
    """*n* betas from *lo* to *hi*, evenly spaced (or log-spaced)."""
    if n < 1:
        raise InvalidInputError(f"beta grid needs at least one point, got {n}")
    if lo < 0 or hi < lo or (n > 1 and hi == lo):
        raise InvalidInputError(f"invalid beta range {lo!r}:{hi!r}")
    if n == 1:
        return [float(lo)]
    if log:
        if lo <= 0:
            raise InvalidInputError("a log-spaced beta grid needs lo > 0")
        return [float(b) for b in np.geomspace(lo, hi, n)]
    return [float(b) for b in np.linspace(lo, hi, n)]


def parse_grid_spec(spec: str, log: bool = False) -> list[float]:
    """Parse ``lo:hi:n`` into a beta grid."""
    parts = spec.split(":")
    if len(parts) != 3:
        raise InvalidInputError(f"grid spec must be lo:hi:n, got {spec!r}")
    try:
        lo, hi, n = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise InvalidInputError(f"grid spec must be lo:hi:n, got {spec!r}") from None
    return beta_grid(lo, hi, n, log)


# ---------------------------------------------------------------------------
# Driver
# ---------------------------------------------------------------------------

def _solve_point(joint: JointXY, objective: Objective, cfg: SolverConfig) -> ScanPoint:
    try:
        result = solve(joint, objective, cfg)
    except IbplaneError as exc:
        return ScanPoint(cfg.beta, PointStatus.FAILED, None, str(exc))
    except Exception as exc:
        logger.exception("beta=%g: solver crashed", cfg.beta)
        return ScanPoint(cfg.beta, PointStatus.FAILED, None, repr(exc))
    status = PointStatus.CONVERGED if result.converged else PointStatus.NOT_CONVERGED
    return ScanPoint(cfg.beta, status, result)


def scan(
    joint: JointXY,
    objective: Objective | str,
    betas: Sequence[float],
    cfg: SolverConfig,
    workers: int | None = None,
) -> ScanResult:
    """Solve *objective* at every β of a strictly increasing grid.

    Each point gets its own seed derived from ``cfg.seed``, so the output is
    reproducible and independent of *workers*.
    """
    kind = Objective.parse(objective)
    grid = [float(b) for b in betas]
    if not grid:
        raise InvalidInputError("beta grid is empty")
    if any(b >= c for b, c in zip(grid, grid[1:])):
        raise InvalidInputError("beta grid must be strictly increasing")
    if any(b < 0 or not math.isfinite(b) for b in grid):
        raise InvalidInputError("betas must be finite and non-negative")

    configs = [cfg.with_point(b, s) for b, s in zip(grid, derive_seeds(cfg.seed, len(grid)))]
    n_workers = min(workers or get_config().workers, len(grid))
    start = time.monotonic()

    points: list[ScanPoint | None] = [None] * len(grid)
    if n_workers <= 1:
        for i, c in enumerate(configs):
            points[i] = _solve_point(joint, kind, c)
            _log_point(kind, points[i])
    else:
        with ProcessPoolExecutor(max_workers=n_workers) as pool:
            futures = {pool.submit(_solve_point, joint, kind, c): i for i, c in enumerate(configs)}
            for fut, i in futures.items():
                try:
                    points[i] = fut.result()
                except Exception as exc:
                    # worker crashed outside the solver
                    points[i] = ScanPoint(grid[i], PointStatus.FAILED, None, repr(exc))
                _log_point(kind, points[i])

    done = [p for p in points if p is not None]
    logger.info(
        "%s scan: %d points in %.1fs (%d failed)",
        kind.value, len(done), time.monotonic() - start,
        sum(p.status is PointStatus.FAILED for p in done),
    )
    return ScanResult(tuple(done), kind, joint.fingerprint())


def _log_point(kind: Objective, point: ScanPoint | None) -> None:
    if point is None:
        return
    if point.result is None:
        logger.warning("%s beta=%g failed: %s", kind.value, point.beta, point.error)
        return
    r = point.result.report
    logger.info(
        "%s beta=%g %s I(X;T)=%.6f I(Y;T)=%.6f",
        kind.value, point.beta, point.status.value, r.i_xt, r.i_yt,
    )


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ScanRecord:
    """One CSV row of a scan."""
    beta: float
    i_xt: float
    i_yt: float
    h_t: float
    objective: float
    iterations: int
    converged: bool
    restart_index: int
    status: PointStatus


def scan_records(result: ScanResult) -> list[ScanRecord]:
    out = []
    for p in result.points:
        if p.result is None:
            nan = math.nan
            out.append(ScanRecord(p.beta, nan, nan, nan, nan, 0, False, -1, p.status))
            continue
        r = p.result
        out.append(ScanRecord(
            p.beta, r.report.i_xt, r.report.i_yt, r.report.h_t, r.objective,
            r.iterations, r.converged, r.restart_index, p.status,
        ))
    return out


def scan_to_csv(result: ScanResult | Sequence[ScanRecord], digits: int | None = None) -> str:
    records = scan_records(result) if isinstance(result, ScanResult) else list(result)
    d = get_config().output_digits if digits is None else digits
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(SCAN_COLUMNS)
    for rec in records:
        writer.writerow([
            format_number(rec.beta, d),
            format_number(rec.i_xt, d),
            format_number(rec.i_yt, d),
            format_number(rec.h_t, d),
            format_number(rec.objective, d),
            rec.iterations,
            "true" if rec.converged else "false",
            rec.restart_index,
            rec.status.value,
        ])
    return buf.getvalue()


def write_scan_csv(result: ScanResult | Sequence[ScanRecord], path: Path | str, digits: int | None = None) -> Path:
    p = Path(path)
    p.write_text(scan_to_csv(result, digits), encoding="utf-8")
    return p


def read_scan_csv(path: Path | str) -> list[ScanRecord]:
    """Parse a scan CSV written by ``write_scan_csv``."""
    p = Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read file: {exc.strerror}", p) from exc
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or tuple(rows[0]) != SCAN_COLUMNS:
        raise ParseError(f"header must be {','.join(SCAN_COLUMNS)}", p, row=1)
    out = []
    for r, row in enumerate(rows[1:], start=2):
        if len(row) != len(SCAN_COLUMNS):
            raise ParseError(f"expected {len(SCAN_COLUMNS)} cells, found {len(row)}", p, row=r)
        try:
            out.append(ScanRecord(
                beta=float(row[0]),
                i_xt=float(row[1]),
                i_yt=float(row[2]),
                h_t=float(row[3]),
                objective=float(row[4]),
                iterations=int(row[5]),
                converged=_parse_bool(row[6]),
                restart_index=int(row[7]),
                status=PointStatus(row[8]),
            ))
        except ValueError as exc:
            raise ParseError(str(exc), p, row=r) from None
    return out


def _parse_bool(text: str) -> bool:
    if text == "true":
        return True
    if text == "false":
        return False
    raise ValueError(f"expected true/false, got {text!r}")


def scan_payload(
    result: ScanResult,
    include_encoders: bool = False,
    x_labels: tuple[str, ...] | None = None,
    digits: int | None = None,
) -> dict[str, Any]:
    """JSON mirror of the CSV, optionally embedding each encoder."""
    d = get_config().output_digits if digits is None else digits

    def num(v: float) -> float | None:
        return None if math.isnan(v) else float(format_number(v, d))

    points = []
    for rec, point in zip(scan_records(result), result.points):
        entry: dict[str, Any] = {
            "beta": num(rec.beta),
            "status": rec.status.value,
            "i_xt": num(rec.i_xt),
            "i_yt": num(rec.i_yt),
            "h_t": num(rec.h_t),
            "objective": num(rec.objective),
            "iterations": rec.iterations,
            "converged": rec.converged,
            "restart_index": rec.restart_index,
        }
        if point.error is not None:
            entry["error"] = point.error
        if include_encoders and point.result is not None:
            entry["encoder"] = encoder_payload(point.result.encoder, x_labels, d)
        points.append(entry)
    return {
        "objective": result.objective.value,
        "fingerprint": result.fingerprint,
        "points": points,
    }


def write_scan_json(
    result: ScanResult,
    path: Path | str,
    include_encoders: bool = False,
    x_labels: tuple[str, ...] | None = None,
) -> Path:
    p = Path(path)
    payload = scan_payload(result, include_encoders, x_labels)
    p.write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")
    return p

"""
Exhaustive oracles for small instances
======================================

``brute_force_front`` enumerates every encoder whose rows lie on a simplex
grid and keeps the upper-left Pareto set of their (I(X;T), I(Y;T)) points;
it is the independent reference the solvers are checked against.
``hard_cluster_front`` evaluates every hard clustering of a deterministic
joint exactly.

Both are guarded: the grid oracle accepts |X| ≤ 4, |T| ≤ 3, grid ≤ 21 and at
most ``brute_force_max_encoders`` encoders; the clustering oracle accepts at
most ``partition_guard`` classes.
"""

from __future__ import annotations

import itertools
import logging
from collections.abc import Sequence
from typing import Final

import numpy as np
from numpy.typing import NDArray
from scipy.special import xlogy

from ibplane.config import get_config
from ibplane.constructs.deterministic import iter_clustering_batches
from ibplane.core.distributions import JointXY, Objective
from ibplane.core.pareto import PARETO_TOL, pareto_upper_left
from ibplane.errors import InvalidInputError, ResourceLimitError
from ibplane.solvers.protocol import SolverConfig
from ibplane.solvers.scan import scan

logger = logging.getLogger("ibplane.solvers.oracle")

MAX_ORACLE_X: Final[int] = 4
MAX_ORACLE_T: Final[int] = 3
MAX_GRID: Final[int] = 21

# Encoders evaluated per vectorised chunk
_CHUNK: Final[int] = 65_536


def simplex_grid(n_t: int, grid_per_row: int) -> NDArray[np.float64]:
    """All probability vectors over *n_t* outcomes in steps of 1/(grid−1)."""
    steps = grid_per_row - 1
    rows = [c for c in itertools.product(range(steps + 1), repeat=n_t) if sum(c) == steps]
    return np.asarray(rows, dtype=np.float64) / steps


def encoder_count(n_x: int, n_t: int, grid_per_row: int) -> int:
    return len(simplex_grid(n_t, grid_per_row)) ** n_x


def check_oracle_guard(
    joint: JointXY, t_cardinality: int, grid_per_row: int, max_encoders: int | None = None
) -> int:
    """Return the encoder count or raise ``ResourceLimitError``."""
    if t_cardinality < 1 or grid_per_row < 2:
        raise InvalidInputError("need t_cardinality >= 1 and grid_per_row >= 2")
    if joint.n_x > MAX_ORACLE_X:
        raise ResourceLimitError("|X| for the brute-force oracle", joint.n_x, MAX_ORACLE_X)
    if t_cardinality > MAX_ORACLE_T:
        raise ResourceLimitError("|T| for the brute-force oracle", t_cardinality, MAX_ORACLE_T)
    if grid_per_row > MAX_GRID:
        raise ResourceLimitError("grid_per_row", grid_per_row, MAX_GRID)
    limit = get_config().brute_force_max_encoders if max_encoders is None else max_encoders
    count = encoder_count(joint.n_x, t_cardinality, grid_per_row)
    if count > limit:
        raise ResourceLimitError("encoders to enumerate", count, limit)
    return count


def _entropy_rows(arr: NDArray[np.float64], axes: tuple[int, ...]) -> NDArray[np.float64]:
    out: NDArray[np.float64] = -xlogy(arr, arr).sum(axis=axes)
    return out


def _prefilter(
    i_xt: NDArray[np.float64], i_yt: NDArray[np.float64]
) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
    """Vectorised upper-left filter, sorted by I(X;T)."""
    order = np.lexsort((-i_yt, i_xt))
    xs, ys = i_xt[order], i_yt[order]
    running = np.maximum.accumulate(ys)
    prev = np.concatenate(([-np.inf], running[:-1]))
    keep = ys > prev + PARETO_TOL
    return xs[keep], ys[keep]


def brute_force_front(
    joint: JointXY,
    t_cardinality: int,
    grid_per_row: int,
    max_encoders: int | None = None,
) -> list[tuple[float, float]]:
    """Pareto front over every grid encoder, sorted by I(X;T).

    Raises:
        ResourceLimitError: when the instance exceeds the oracle guard
    """
    total = check_oracle_guard(joint, t_cardinality, grid_per_row, max_encoders)
    grid = simplex_grid(t_cardinality, grid_per_row)
    m = len(grid)
    p = joint.p
    p_x = joint.marginal_x
    h_x = float(-xlogy(p_x, p_x).sum())
    radix = m ** np.arange(joint.n_x, dtype=np.int64)

    front_x = np.empty(0)
    front_y = np.empty(0)
    for start in range(0, total, _CHUNK):
        idx = np.arange(start, min(start + _CHUNK, total), dtype=np.int64)
        digits = (idx[:, None] // radix[None, :]) % m
        q = grid[digits]                                  # (c, x, t)
        p_xt = p_x[None, :, None] * q
        p_yt = np.einsum("xy,cxt->cyt", p, q)
        p_t = p_xt.sum(axis=1)
        h_t = _entropy_rows(p_t, (1,))
        i_xt = h_t + h_x - _entropy_rows(p_xt, (1, 2))
        i_yt = h_t + _entropy_rows(p_yt.sum(axis=2), (1,)) - _entropy_rows(p_yt, (1, 2))
        i_xt = np.maximum(i_xt, 0.0)
        i_yt = np.minimum(np.maximum(i_yt, 0.0), i_xt)
        front_x, front_y = _prefilter(
            np.concatenate((front_x, i_xt)), np.concatenate((front_y, i_yt))
        )
    front = pareto_upper_left(zip(front_x.tolist(), front_y.tolist()))
    logger.debug("brute-force front: %d encoders, %d front points", total, len(front))
    return front


def hard_cluster_front(joint: JointXY, max_classes: int | None = None) -> list[tuple[float, float, float]]:
    """(H(T), I(X;T), I(Y;T)) for every hard clustering, in canonical order."""
    out: list[tuple[float, float, float]] = []
    for _, evals in iter_clustering_batches(joint, max_classes):
        out.extend((float(h), float(ix), float(iy)) for h, ix, iy in evals)
    return out


def solver_front(
    joint: JointXY,
    cfg: SolverConfig,
    betas: Sequence[float],
    workers: int | None = None,
) -> list[tuple[float, float]]:
    """Pareto front of a squared-IB scan; the stand-in for F when the grid oracle is out of reach."""
    result = scan(joint, Objective.SQUARED_IB, betas, cfg, workers)
    points = [(r.report.i_xt, r.report.i_yt) for r in result.successful]
    return pareto_upper_left([(0.0, 0.0), *points])

"""Seeding and best-of-restarts bookkeeping shared by every solver."""

from __future__ import annotations

import logging
from collections.abc import Callable, Sequence
from typing import TypeAlias

import numpy as np
from numpy.typing import NDArray

from ibplane.core.distributions import (
    Encoder,
    JointXY,
    Objective,
    evaluate,
    objective_value,
)
from ibplane.solvers.protocol import SolveResult, SolverConfig

logger = logging.getLogger("ibplane.solvers.restarts")

# Below this I(X;Y) the joint carries no predictive information
ZERO_INFORMATION: float = 1e-12

# (p, kind, cfg, n_t, rng) -> (encoder matrix, iterations, converged)
RestartFn: TypeAlias = Callable[
    [NDArray[np.float64], Objective, SolverConfig, int, np.random.Generator],
    tuple[NDArray[np.float64], int, bool],
]


def derive_seeds(master_seed: int, n: int) -> list[int]:
    """*n* independent 64-bit seeds spawned from *master_seed*."""
    children = np.random.SeedSequence(master_seed).spawn(n)
    return [int(c.generate_state(1, dtype=np.uint64)[0]) for c in children]


def _result(
    joint: JointXY, q: NDArray[np.float64], kind: Objective, cfg: SolverConfig,
    iterations: int, converged: bool, index: int,
) -> SolveResult:
    enc = Encoder(q / q.sum(axis=1, keepdims=True))
    report = evaluate(joint, enc)
    return SolveResult(
        encoder=enc,
        report=report,
        objective=objective_value(report, kind, cfg.beta),
        kind=kind,
        beta=cfg.beta,
        iterations=iterations,
        converged=converged,
        restart_index=index,
    )


def run_restart_loop(
    joint: JointXY, kind: Objective, cfg: SolverConfig, restart: RestartFn
) -> list[SolveResult]:
    """Run *restart* once per configured restart, each with its own seed.

    Joints without predictive information short-circuit to a single
    constant-encoder result.
    """
    n_t = cfg.cardinality_for(joint.n_x)
    if joint.mutual_information < ZERO_INFORMATION:
        logger.debug("I(X;Y) = 0, returning the constant encoder")
        q = Encoder.constant(joint.n_x, n_t).q
        return [_result(joint, np.array(q), kind, cfg, 0, True, 0)]

    results = []
    for index, seed in enumerate(derive_seeds(cfg.seed, cfg.restarts)):
        rng = np.random.default_rng(seed)
        q, iterations, converged = restart(joint.p, kind, cfg, n_t, rng)
        results.append(_result(joint, q, kind, cfg, iterations, converged, index))
    logger.debug(
        "%s beta=%g: %d restarts, %d converged, best objective %.6g",
        kind.value, cfg.beta, len(results),
        sum(r.converged for r in results), best_result(results).objective,
    )
    return results


def best_result(results: Sequence[SolveResult]) -> SolveResult:
    """Highest objective; ties go to the lowest restart index.

    When any restart converged, only converged restarts compete.
    """
    if not results:
        raise ValueError("no restart results to choose from")
    pool = [r for r in results if r.converged] or list(results)
    best = pool[0]
    for r in pool[1:]:
        if r.objective > best.objective:
            best = r
    return best

"""Objective-tag dispatch to the soft and hard solvers."""

from __future__ import annotations

from ibplane.core.distributions import JointXY, Objective
from ibplane.solvers.deterministic import dib_restarts
from ibplane.solvers.lagrangian import ib_restarts
from ibplane.solvers.protocol import SolveResult, SolverConfig
from ibplane.solvers.restarts import best_result


def run_restarts(joint: JointXY, objective: Objective | str, cfg: SolverConfig) -> list[SolveResult]:
    """All per-restart results for *objective*, in restart order."""
    kind = Objective.parse(objective)
    if kind.uses_entropy:
        return dib_restarts(joint, cfg, kind)
    return ib_restarts(joint, cfg, kind)


def solve(joint: JointXY, objective: Objective | str, cfg: SolverConfig) -> SolveResult:
    """Best-of-restarts result for *objective*."""
    return best_result(run_restarts(joint, objective, cfg))

"""
Hard-assignment solvers: dIB and squared-dIB
============================================

Each restart runs in two stages.

1. KL-argmax iteration from a random hard assignment:
       t(x) = argmax_t [ln q(t) − KL(p(y|x) ‖ p(y|t)) / β]
   ties to the lowest t, until the assignment stops changing. For the
   squared functional β is replaced by the damped β_eff = 2β·H(T).

2. Sequential refinement on the functional itself: inputs are visited in
   index order and each moves to the cluster, possibly an empty one, that
   strictly increases I(Y;T) − β·H(T) (or − β·H(T)²). Sweeps repeat until no
   input moves. KL scores alone can neither merge two pure clusters nor open
   an empty one; this stage does both.
"""

from __future__ import annotations

import logging
from typing import Final

import numpy as np
from numpy.typing import NDArray
from scipy.special import xlogy

from ibplane.core.distributions import JointXY, Objective, _plane, functional
from ibplane.solvers.lagrangian import BETA_EFF_FLOOR, kl_scores
from ibplane.solvers.protocol import SolveResult, SolverConfig
from ibplane.solvers.restarts import best_result, run_restart_loop

logger = logging.getLogger("ibplane.solvers.deterministic")

# A refinement move must gain more than this
MOVE_TOL: Final[float] = 1e-12


def _one_hot(assign: NDArray[np.int64], n_t: int) -> NDArray[np.float64]:
    q = np.zeros((assign.size, n_t))
    q[np.arange(assign.size), assign] = 1.0
    return q


def _phi(v: NDArray[np.float64]) -> NDArray[np.float64]:
    out: NDArray[np.float64] = -xlogy(v, v)
    return out


def dib_assign(p: NDArray[np.float64], assign: NDArray[np.int64], n_t: int, beta: float) -> NDArray[np.int64]:
    """One KL-argmax reassignment at weight *beta* (β = 0: smallest KL)."""
    kl, q_t = kl_scores(p, _one_hot(assign, n_t))
    live = q_t > 0.0
    if beta == 0.0:
        scores = np.where(live, -kl, -np.inf)
    else:
        with np.errstate(divide="ignore"):
            scores = np.where(live, np.log(q_t) - kl / beta, -np.inf)
    return np.argmax(scores, axis=1).astype(np.int64)


def refine(
    p: NDArray[np.float64],
    assign: NDArray[np.int64],
    n_t: int,
    kind: Objective,
    beta: float,
    max_sweeps: int,
) -> tuple[NDArray[np.int64], int]:
    """Greedy single-input moves until none improves the functional.

    Returns the refined assignment and the number of sweeps run.
    """
    assign = assign.copy()
    p_x = p.sum(axis=1)
    h_y = float(_phi(p.sum(axis=0)).sum())

    def score(h_t: NDArray[np.float64], h_yt: NDArray[np.float64]) -> NDArray[np.float64]:
        i_yt = h_y + h_t - h_yt
        cost = h_t * h_t if kind.is_squared else h_t
        out: NDArray[np.float64] = i_yt - beta * cost
        return out

    for sweep in range(1, max_sweeps + 1):
        p_yt = p.T @ _one_hot(assign, n_t)
        p_t = p_yt.sum(axis=0)
        h_t = float(_phi(p_t).sum())
        h_yt = float(_phi(p_yt).sum())
        moved = False
        for x in range(p.shape[0]):
            a = int(assign[x])
            row = p[x]
            # state with x taken out of its cluster
            pt_rm = p_t.copy()
            pt_rm[a] -= p_x[x]
            pyt_rm = p_yt.copy()
            pyt_rm[:, a] -= row
            np.maximum(pt_rm, 0.0, out=pt_rm)
            np.maximum(pyt_rm, 0.0, out=pyt_rm)
            ht_rm = h_t - _phi(p_t[a]) + _phi(pt_rm[a])
            hyt_rm = h_yt - _phi(p_yt[:, a]).sum() + _phi(pyt_rm[:, a]).sum()

            cand_t = pt_rm + p_x[x]
            cand_yt = pyt_rm + row[:, None]
            cand_ht = ht_rm - _phi(pt_rm) + _phi(cand_t)
            cand_hyt = hyt_rm - _phi(pyt_rm).sum(axis=0) + _phi(cand_yt).sum(axis=0)
            values = score(cand_ht, cand_hyt)
            b = int(np.argmax(values))
            if b == a or values[b] <= values[a] + MOVE_TOL:
                continue
            assign[x] = b
            p_t = pt_rm
            p_t[b] = cand_t[b]
            p_yt = pyt_rm
            p_yt[:, b] = cand_yt[:, b]
            h_t = float(cand_ht[b])
            h_yt = float(cand_hyt[b])
            moved = True
        if not moved:
            return assign, sweep
    return assign, max_sweeps


def _dib_restart(
    p: NDArray[np.float64],
    kind: Objective,
    cfg: SolverConfig,
    n_t: int,
    rng: np.random.Generator,
) -> tuple[NDArray[np.float64], int, bool]:
    assign = rng.integers(0, n_t, size=p.shape[0]).astype(np.int64)
    q = _one_hot(assign, n_t)
    i_xt, i_yt, h_t, _ = _plane(p, q)
    prev = functional(kind, cfg.beta, i_xt, i_yt, h_t)
    beta_eff = max(2.0 * cfg.beta * h_t, BETA_EFF_FLOOR)

    converged = False
    iterations = cfg.max_iters
    for it in range(1, cfg.max_iters + 1):
        if kind.is_squared:
            target = max(2.0 * cfg.beta * h_t, BETA_EFF_FLOOR)
            beta_eff = cfg.damping * target + (1.0 - cfg.damping) * beta_eff
            new = dib_assign(p, assign, n_t, beta_eff)
        else:
            new = dib_assign(p, assign, n_t, cfg.beta)
        i_xt, i_yt, h_t, _ = _plane(p, _one_hot(new, n_t))
        value = functional(kind, cfg.beta, i_xt, i_yt, h_t)
        unchanged = bool(np.array_equal(new, assign))
        assign = new
        if unchanged and abs(value - prev) < cfg.tol:
            converged, iterations = True, it
            break
        prev = value

    assign, sweeps = refine(p, assign, n_t, kind, cfg.beta, cfg.max_iters)
    if sweeps == cfg.max_iters:
        converged = False
    return _one_hot(assign, n_t), iterations + sweeps, converged


def dib_restarts(joint: JointXY, cfg: SolverConfig, kind: Objective) -> list[SolveResult]:
    """Every restart of the hard solver for *kind* (an entropy objective)."""
    if not kind.uses_entropy:
        raise ValueError(f"{kind.value} is not a hard-assignment objective")
    return run_restart_loop(joint, kind, cfg, _dib_restart)


def solve_dib(joint: JointXY, cfg: SolverConfig) -> SolveResult:
    """Best-of-restarts hard clustering maximising I(Y;T) − β·H(T)."""
    return best_result(dib_restarts(joint, cfg, Objective.DIB))


def solve_squared_dib(joint: JointXY, cfg: SolverConfig) -> SolveResult:
    """Best-of-restarts hard clustering maximising I(Y;T) − β·H(T)²."""
    return best_result(dib_restarts(joint, cfg, Objective.SQUARED_DIB))

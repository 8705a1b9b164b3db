"""
Soft-assignment solvers: IB Lagrangian and squared-IB
=====================================================

Alternating self-consistent updates, run in the log domain:

    q(t)     = Σ_x p(x) q(t|x)
    p(y|t)   = Σ_x p(x, y) q(t|x) / q(t)
    q(t|x)  ∝ q(t) · exp(−KL(p(y|x) ‖ p(y|t)) / β)

β = 0 removes the compression pressure and the update becomes a hard
assignment to the cluster with the smallest KL score.

The squared functional I(Y;T) − β·I(X;T)² is solved through the Lagrangian:
before each update the weight is moved toward β_eff = 2β·I(X;T), the slope of
the squared penalty at the current point, with exponential damping.
"""

from __future__ import annotations

import logging
from typing import Final

import numpy as np
from numpy.typing import NDArray
from scipy.special import softmax, xlogy

from ibplane.core.distributions import JointXY, Objective, _plane, functional
from ibplane.solvers.protocol import SolveResult, SolverConfig
from ibplane.solvers.restarts import best_result, run_restart_loop

logger = logging.getLogger("ibplane.solvers.lagrangian")

# Posteriors are floored here before taking logs
LOG_FLOOR: Final[float] = 1e-300

# Smallest effective weight in the squared solver
BETA_EFF_FLOOR: Final[float] = 1e-6


def kl_scores(
    p: NDArray[np.float64], q: NDArray[np.float64]
) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
    """KL(p(y|x) ‖ p(y|t)) for every (x, t), and the marginal q(t).

    Columns of zero-mass t carry meaningless scores; callers mask them
    through q(t) = 0.
    """
    p_x = p.sum(axis=1)
    cond = p / p_x[:, None]
    p_yt = p.T @ q
    q_t = p_yt.sum(axis=0)
    safe_t = np.where(q_t > 0.0, q_t, 1.0)
    log_post = np.log(np.maximum(p_yt / safe_t, LOG_FLOOR))
    neg_h = xlogy(cond, cond).sum(axis=1)
    return neg_h[:, None] - cond @ log_post, q_t


def ib_update(p: NDArray[np.float64], q: NDArray[np.float64], beta: float) -> NDArray[np.float64]:
    """One self-consistent update of q(t|x) at weight *beta*."""
    kl, q_t = kl_scores(p, q)
    if beta == 0.0:
        idx = np.argmin(np.where(q_t > 0.0, kl, np.inf), axis=1)
        hard = np.zeros_like(q)
        hard[np.arange(q.shape[0]), idx] = 1.0
        return hard
    with np.errstate(divide="ignore"):
        log_qt = np.log(q_t)
    out: NDArray[np.float64] = softmax(log_qt[None, :] - kl / beta, axis=1)
    return out


def _ib_restart(
    p: NDArray[np.float64],
    kind: Objective,
    cfg: SolverConfig,
    n_t: int,
    rng: np.random.Generator,
) -> tuple[NDArray[np.float64], int, bool]:
    q = rng.dirichlet(np.ones(n_t), size=p.shape[0])
    i_xt, i_yt, h_t, _ = _plane(p, q)
    prev = functional(kind, cfg.beta, i_xt, i_yt, h_t)
    beta_eff = max(2.0 * cfg.beta * i_xt, BETA_EFF_FLOOR)

    for it in range(1, cfg.max_iters + 1):
        if kind.is_squared:
            target = max(2.0 * cfg.beta * i_xt, BETA_EFF_FLOOR)
            beta_eff = cfg.damping * target + (1.0 - cfg.damping) * beta_eff
            q = ib_update(p, q, beta_eff)
        else:
            q = ib_update(p, q, cfg.beta)
        i_xt, i_yt, h_t, _ = _plane(p, q)
        value = functional(kind, cfg.beta, i_xt, i_yt, h_t)
        if abs(value - prev) < cfg.tol:
            return q, it, True
        prev = value
    return q, cfg.max_iters, False


def ib_restarts(joint: JointXY, cfg: SolverConfig, kind: Objective) -> list[SolveResult]:
    """Every restart of the soft solver for *kind* (a mutual-information objective)."""
    if kind.uses_entropy:
        raise ValueError(f"{kind.value} is not a soft-assignment objective")
    return run_restart_loop(joint, kind, cfg, _ib_restart)


def solve_ib_lagrangian(joint: JointXY, cfg: SolverConfig) -> SolveResult:
    """Best-of-restarts local maximiser of I(Y;T) − β·I(X;T)."""
    return best_result(ib_restarts(joint, cfg, Objective.IB_LAGRANGIAN))


def solve_squared_ib(joint: JointXY, cfg: SolverConfig) -> SolveResult:
    """Best-of-restarts local maximiser of I(Y;T) − β·I(X;T)²."""
    return best_result(ib_restarts(joint, cfg, Objective.SQUARED_IB))

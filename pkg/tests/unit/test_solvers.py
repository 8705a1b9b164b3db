"""
Tests for the Bottleneck Solvers
================================

Verifies:
1. SolverConfig validation and overrides
2. Seed derivation and best-of-restarts selection
3. IB Lagrangian: corner for β < 1, hard β = 0 update
4. Squared-IB: β controls where on the curve the solution sits
5. dIB / squared-dIB: hard encoders, step levels, refinement
6. Degenerate joints short-circuit to the constant encoder
7. Reproducibility under a fixed seed
"""

import math

import numpy as np
import pytest
from pydantic import ValidationError

from ibplane.core import BottleneckReport, Encoder, JointXY, Objective
from ibplane.solvers import (
    SolveResult,
    SolverConfig,
    best_result,
    derive_seeds,
    run_restarts,
    solve,
    solve_dib,
    solve_ib_lagrangian,
    solve_squared_dib,
    solve_squared_ib,
)
from ibplane.solvers.deterministic import refine
from ibplane.solvers.lagrangian import ib_update, kl_scores

LN2 = math.log(2)
LN4 = math.log(4)


def _result(objective: float, converged: bool, index: int) -> SolveResult:
    return SolveResult(
        encoder=Encoder.identity(2),
        report=BottleneckReport(0.0, 0.0, 0.0, 1.0),
        objective=objective,
        kind=Objective.IB_LAGRANGIAN,
        beta=0.5,
        iterations=1,
        converged=converged,
        restart_index=index,
    )


# ---------------------------------------------------------------------------
# Configuration and restarts
# ---------------------------------------------------------------------------

class TestSolverConfig:
    """Immutable solver parameters."""

    def test_from_settings(self, monkeypatch: pytest.MonkeyPatch) -> None:
        monkeypatch.setenv("IBPLANE_RESTARTS", "7")
        cfg = SolverConfig.from_settings(beta=0.3)
        assert cfg.restarts == 7
        assert cfg.beta == 0.3

    def test_rejects_negative_beta(self) -> None:
        with pytest.raises(ValidationError):
            SolverConfig(beta=-1.0)

    def test_rejects_infinite_beta(self) -> None:
        with pytest.raises(ValidationError):
            SolverConfig(beta=math.inf)

    def test_rejects_unknown_field(self) -> None:
        with pytest.raises(ValidationError):
            SolverConfig(temperature=1.0)  # type: ignore[call-arg]

    def test_frozen(self) -> None:
        cfg = SolverConfig()
        with pytest.raises(ValidationError):
            cfg.beta = 2.0  # type: ignore[misc]

    def test_with_point(self) -> None:
        cfg = SolverConfig(restarts=3, seed=1).with_point(0.7, seed=99)
        assert (cfg.beta, cfg.seed, cfg.restarts) == (0.7, 99, 3)

    def test_default_cardinality(self) -> None:
        assert SolverConfig().cardinality_for(4) == 5
        assert SolverConfig(t_cardinality=2).cardinality_for(4) == 2


class TestRestarts:
    """Seeding and selection."""

    def test_derive_seeds_deterministic(self) -> None:
        assert derive_seeds(42, 5) == derive_seeds(42, 5)
        assert len(set(derive_seeds(42, 5))) == 5
        assert derive_seeds(42, 3) != derive_seeds(43, 3)

    def test_best_is_highest(self) -> None:
        results = [_result(0.1, True, 0), _result(0.4, True, 1), _result(0.2, True, 2)]
        assert best_result(results).restart_index == 1

    def test_ties_go_to_lowest_index(self) -> None:
        results = [_result(0.4, True, 0), _result(0.4, True, 1)]
        assert best_result(results).restart_index == 0

    def test_converged_preferred(self) -> None:
        results = [_result(0.9, False, 0), _result(0.3, True, 1)]
        assert best_result(results).restart_index == 1

    def test_all_unconverged(self) -> None:
        results = [_result(0.2, False, 0), _result(0.5, False, 1)]
        assert best_result(results).restart_index == 1

    def test_empty(self) -> None:
        with pytest.raises(ValueError):
            best_result([])

    def test_run_restarts_count(self, uniform4: JointXY, fast_cfg: SolverConfig) -> None:
        results = run_restarts(uniform4, "ib-lagrangian", fast_cfg.with_point(0.5))
        assert [r.restart_index for r in results] == list(range(fast_cfg.restarts))


# ---------------------------------------------------------------------------
# Soft solvers
# ---------------------------------------------------------------------------

class TestIbUpdate:
    """Single self-consistent updates."""

    def test_kl_zero_for_matching_cluster(self, uniform4: JointXY) -> None:
        kl, q_t = kl_scores(uniform4.p, np.eye(4))
        np.testing.assert_allclose(np.diag(kl), 0.0, atol=1e-12)
        np.testing.assert_allclose(q_t, [0.25] * 4)

    def test_rows_stochastic(self, uniform4: JointXY) -> None:
        q = np.random.default_rng(0).dirichlet(np.ones(5), size=4)
        out = ib_update(uniform4.p, q, 0.5)
        np.testing.assert_allclose(out.sum(axis=1), 1.0)

    def test_beta_zero_is_hard(self, uniform4: JointXY) -> None:
        q = np.random.default_rng(1).dirichlet(np.ones(5), size=4)
        out = ib_update(uniform4.p, q, 0.0)
        assert set(np.unique(out)) <= {0.0, 1.0}
        np.testing.assert_array_equal(out.sum(axis=1), np.ones(4))


class TestIbLagrangian:
    """I(Y;T) − β·I(X;T)."""

    @pytest.mark.parametrize("beta", [0.2, 0.5, 0.8])
    def test_corner_below_one(self, uniform4: JointXY, beta: float) -> None:
        cfg = SolverConfig(restarts=10, seed=3, beta=beta)
        res = solve_ib_lagrangian(uniform4, cfg)
        assert res.report.i_yt == pytest.approx(LN4, abs=1e-3)
        assert res.report.i_xt == pytest.approx(LN4, abs=1e-3)
        assert res.objective == pytest.approx((1 - beta) * LN4, abs=1e-3)

    def test_result_fields(self, uniform4: JointXY, fast_cfg: SolverConfig) -> None:
        res = solve(uniform4, Objective.IB_LAGRANGIAN, fast_cfg.with_point(0.5))
        assert res.kind is Objective.IB_LAGRANGIAN
        assert res.beta == 0.5
        assert res.encoder.n_t == 5
        assert 0 <= res.restart_index < fast_cfg.restarts
        assert res.iterations >= 1

    def test_reproducible(self, uniform4: JointXY, fast_cfg: SolverConfig) -> None:
        a = solve_ib_lagrangian(uniform4, fast_cfg.with_point(0.5))
        b = solve_ib_lagrangian(uniform4, fast_cfg.with_point(0.5))
        np.testing.assert_array_equal(a.encoder.q, b.encoder.q)
        assert a.objective == b.objective

    def test_degenerate_joint(self, independent: JointXY, fast_cfg: SolverConfig) -> None:
        results = run_restarts(independent, Objective.IB_LAGRANGIAN, fast_cfg.with_point(0.5))
        assert len(results) == 1
        assert results[0].converged
        assert results[0].report.i_xt == pytest.approx(0.0, abs=1e-12)
        assert results[0].report.i_yt == pytest.approx(0.0, abs=1e-12)


class TestSquaredIb:
    """I(Y;T) − β·I(X;T)²."""

    def test_beta_moves_along_curve(self, uniform4: JointXY) -> None:
        small = solve_squared_ib(uniform4, SolverConfig(restarts=5, seed=5, beta=0.2))
        large = solve_squared_ib(uniform4, SolverConfig(restarts=5, seed=5, beta=5.0))
        assert small.report.i_xt > large.report.i_xt + 0.3

    def test_stays_on_diagonal(self, uniform4: JointXY, fast_cfg: SolverConfig) -> None:
        res = solve_squared_ib(uniform4, fast_cfg.with_point(1.0))
        # T only ever depends on X through Y here
        assert res.report.i_yt == pytest.approx(res.report.i_xt, abs=1e-9)

    def test_entropy_objective_rejected(self, uniform4: JointXY, fast_cfg: SolverConfig) -> None:
        from ibplane.solvers.lagrangian import ib_restarts

        with pytest.raises(ValueError):
            ib_restarts(uniform4, fast_cfg, Objective.DIB)


# ---------------------------------------------------------------------------
# Hard solvers
# ---------------------------------------------------------------------------

class TestDib:
    """I(Y;T) − β·H(T) over hard clusterings."""

    def test_copy_below_one(self, uniform4: JointXY, fast_cfg: SolverConfig) -> None:
        res = solve_dib(uniform4, fast_cfg.with_point(0.5))
        assert res.encoder.is_hard
        assert res.report.h_t == pytest.approx(LN4, abs=1e-9)
        assert res.report.i_yt == pytest.approx(LN4, abs=1e-9)

    def test_constant_above_one(self, uniform4: JointXY, fast_cfg: SolverConfig) -> None:
        res = solve_dib(uniform4, fast_cfg.with_point(2.0))
        assert res.encoder.is_hard
        assert res.report.h_t == pytest.approx(0.0, abs=1e-9)

    def test_squared_dib_two_clusters(self, uniform4: JointXY, fast_cfg: SolverConfig) -> None:
        beta = 1.0 / (2.0 * LN2)
        res = solve_squared_dib(uniform4, fast_cfg.with_point(beta))
        assert res.encoder.is_hard
        assert res.report.h_t == pytest.approx(LN2, abs=1e-9)
        assert res.report.i_yt == pytest.approx(LN2, abs=1e-9)

    def test_solution_on_step_levels(self, uniform4: JointXY, fast_cfg: SolverConfig) -> None:
        levels = [0.0, 0.75 * math.log(4 / 3) + 0.25 * LN4, LN2, 1.5 * LN2, LN4]
        for beta in (0.2, 0.6, 1.0, 2.0):
            res = solve_squared_dib(uniform4, fast_cfg.with_point(beta))
            assert min(abs(res.report.h_t - h) for h in levels) < 1e-9

    def test_refine_opens_empty_cluster(self, uniform4: JointXY) -> None:
        assign = np.array([0, 0, 1, 1], dtype=np.int64)
        out, sweeps = refine(uniform4.p, assign, 5, Objective.DIB, 0.5, 100)
        assert len(set(out.tolist())) == 4
        assert sweeps >= 2

    def test_refine_merges(self, uniform4: JointXY) -> None:
        assign = np.array([0, 1, 2, 3], dtype=np.int64)
        out, _ = refine(uniform4.p, assign, 4, Objective.DIB, 2.0, 100)
        assert len(set(out.tolist())) == 1

    def test_refine_stops_at_optimum(self, uniform4: JointXY) -> None:
        assign = np.array([0, 1, 2, 3], dtype=np.int64)
        out, sweeps = refine(uniform4.p, assign, 5, Objective.DIB, 0.5, 100)
        np.testing.assert_array_equal(out, assign)
        assert sweeps == 1

    def test_soft_objective_rejected(self, uniform4: JointXY, fast_cfg: SolverConfig) -> None:
        from ibplane.solvers.deterministic import dib_restarts

        with pytest.raises(ValueError):
            dib_restarts(uniform4, fast_cfg, Objective.SQUARED_IB)

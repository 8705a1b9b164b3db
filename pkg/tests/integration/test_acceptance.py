"""
Acceptance Runs on Synthetic Joints
===================================

End-to-end properties on the 100-input, 10-class uniform joint, on small
deterministic joints the grid oracle can enumerate and on uniform
four-class joints. All tests here are slow.

Verifies:
1. Lagrangian scans over β ∈ [0.1, 0.9] collapse onto the corner
2. Squared-IB scans recover I(X;T) ≈ min{1/(2β), H(Y)} on the diagonal,
   with I(X;T) non-increasing in β
3. T_alpha sweeps the diagonal exactly
4. Solver fronts of every objective sit on the grid oracle's front, and
   T = f(X) scores at least as well as any grid encoder
5. Squared-dIB at β = 1/(2 ln 2) has a unique optimal level, found by most restarts
6. Randomised bound sweeps report no violations over 1000 trials per bound,
   and the Lagrangian sandwich is rarely inconclusive
7. A perfectly predicting two-stage chain keeps I(Y;T) = H(Y) at both stages
"""

import math
from collections import Counter

import numpy as np
import pytest

from ibplane.bounds import summarize, sweep
from ibplane.constructs import t_alpha_encoder, t_copy_encoder
from ibplane.core import (
    Encoder,
    JointXY,
    LayerChain,
    Objective,
    chain_evaluate,
    evaluate,
    joint_from_function,
    objective_value,
    point_prediction_error,
)
from ibplane.core.pareto import pareto_upper_left
from ibplane.demo import demo_joint
from ibplane.solvers import (
    ScanResult,
    SolverConfig,
    beta_grid,
    brute_force_front,
    hard_cluster_front,
    run_restarts,
    scan,
)

pytestmark = [pytest.mark.slow, pytest.mark.integration]

LN2 = math.log(2)
LN10 = math.log(10)

# Plane distances within this count as a match (nats)
PLANE_TOL = 0.05

# Every deterministic joint with uniform p(x) on two or three inputs, up to relabelling
SMALL_JOINTS = {
    "2-identity": [0, 1],
    "2-constant": [0, 0],
    "3-identity": [0, 1, 2],
    "3-merged": [0, 0, 1],
    "3-constant": [0, 0, 0],
}

SMALL_GRIDS = {
    Objective.IB_LAGRANGIAN: beta_grid(0.1, 0.9, 9),
    Objective.DIB: beta_grid(0.1, 0.9, 9),
    Objective.SQUARED_IB: beta_grid(0.1, 5.0, 15, log=True),
    Objective.SQUARED_DIB: beta_grid(0.1, 5.0, 15, log=True),
}


def upper_envelope(front: list[tuple[float, float]]) -> tuple[np.ndarray, np.ndarray]:
    """Upper concave hull of a front; grid fronts leave gaps a solver may land in."""
    hull: list[tuple[float, float]] = []
    for p in sorted(front):
        while len(hull) >= 2:
            (ox, oy), (ax, ay) = hull[-2], hull[-1]
            if (ax - ox) * (p[1] - oy) - (ay - oy) * (p[0] - ox) < 0:
                break
            hull.pop()
        hull.append(p)
    xs, ys = zip(*hull)
    return np.asarray(xs), np.asarray(ys)


@pytest.fixture(scope="module")
def hundred() -> JointXY:
    return demo_joint(10, 10)


@pytest.fixture(scope="module")
def cfg() -> SolverConfig:
    return SolverConfig(restarts=20, seed=20190101)


@pytest.fixture(scope="module")
def squared_scan(hundred: JointXY, cfg: SolverConfig) -> ScanResult:
    return scan(hundred, Objective.SQUARED_IB, beta_grid(0.1, 5.0, 15, log=True), cfg, workers=1)


@pytest.fixture(scope="module", params=list(SMALL_JOINTS))
def small(request: pytest.FixtureRequest) -> tuple[JointXY, list[tuple[float, float]]]:
    f = SMALL_JOINTS[request.param]
    joint = joint_from_function(f, [1.0 / len(f)] * len(f), n_y=len(f))
    return joint, brute_force_front(joint, 3, 21)


class TestIssueOne:
    """Lagrangian collapse and its squared fix."""

    def test_corner_collapse(self, hundred: JointXY, cfg: SolverConfig) -> None:
        result = scan(hundred, Objective.IB_LAGRANGIAN, beta_grid(0.1, 0.9, 9), cfg, workers=1)
        assert result.failed == 0
        for r in result.successful:
            dist = math.hypot(r.report.i_xt - LN10, r.report.i_yt - LN10)
            assert dist < PLANE_TOL, f"beta={r.beta}: {dist:.4f} from the corner"

    def test_curve_recovery(self, squared_scan: ScanResult) -> None:
        converged = [r for r in squared_scan.successful if r.converged]
        assert len(converged) >= 10
        for r in converged:
            target = min(1.0 / (2.0 * r.beta), LN10)
            assert r.report.i_xt == pytest.approx(target, abs=PLANE_TOL), f"beta={r.beta}"
            assert r.report.i_yt == pytest.approx(r.report.i_xt, abs=PLANE_TOL)

    def test_compression_non_increasing_in_beta(self, squared_scan: ScanResult) -> None:
        converged = [r for r in squared_scan.successful if r.converged]
        for lo, hi in zip(converged, converged[1:]):
            assert hi.report.i_xt <= lo.report.i_xt + 0.02, f"beta {lo.beta:.4g} -> {hi.beta:.4g}"

    def test_talpha_closed_form(self, hundred: JointXY) -> None:
        for k in range(101):
            alpha = k / 100
            rep = evaluate(hundred, t_alpha_encoder(alpha, hundred))
            assert abs(rep.i_xt - alpha * hundred.h_y) <= 1e-9
            assert abs(rep.i_xt - rep.i_yt) <= 1e-9


class TestGridOracle:
    """Solvers and constructions against exhaustive grid search."""

    @pytest.mark.parametrize("objective", list(SMALL_GRIDS))
    def test_solver_front_on_oracle_front(
        self, small: tuple[JointXY, list[tuple[float, float]]], objective: Objective
    ) -> None:
        joint, oracle = small
        xs, ys = upper_envelope(oracle)
        cfg = SolverConfig(restarts=10, seed=20190101, t_cardinality=3)
        result = scan(joint, objective, SMALL_GRIDS[objective], cfg, workers=1)
        points = [(r.report.i_xt, r.report.i_yt) for r in result.successful if r.converged]
        assert points, f"{objective.value}: no converged point"
        for x, y in pareto_upper_left(points):
            gap = abs(y - float(np.interp(x, xs, ys)))
            assert gap <= PLANE_TOL, f"{objective.value} at I(X;T)={x:.4f}: {gap:.4f} off"

    def test_oracle_under_deterministic_curve(self, small: tuple[JointXY, list[tuple[float, float]]]) -> None:
        joint, oracle = small
        for x, y in oracle:
            assert y <= min(x, joint.h_y) + 1e-9

    @pytest.mark.parametrize("beta", [0.0, 0.25, 0.5, 0.75, 1.0])
    def test_copy_encoder_beats_grid(
        self, small: tuple[JointXY, list[tuple[float, float]]], beta: float
    ) -> None:
        joint, oracle = small
        copy = objective_value(evaluate(joint, t_copy_encoder(joint)), Objective.IB_LAGRANGIAN, beta)
        assert copy == pytest.approx((1.0 - beta) * joint.h_y, abs=1e-12)
        assert copy >= max(y - beta * x for x, y in oracle) - 1e-9


class TestSquaredDib:
    """I(Y;T) − β·H(T)² on four uniform classes."""

    BETA = 1.0 / (2.0 * LN2)

    def test_unique_optimal_level(self, uniform4: JointXY) -> None:
        values = [(i_yt - self.BETA * h_t**2, h_t) for h_t, _, i_yt in hard_cluster_front(uniform4)]
        best = max(v for v, _ in values)
        levels = {round(h, 9) for v, h in values if v > best - 1e-9}
        assert levels == {round(LN2, 9)}

    def test_restarts_recover_it(self, uniform4: JointXY) -> None:
        results = run_restarts(
            uniform4, Objective.SQUARED_DIB, SolverConfig(restarts=20, seed=5, beta=self.BETA)
        )
        hits = sum(abs(r.report.h_t - LN2) < 1e-9 for r in results)
        assert hits >= 18


class TestBoundSweeps:
    """No violations on randomised perturbations."""

    def test_a1_a2_fano(self) -> None:
        reports = sweep(
            "a1,a2,issue3", [0.005, 0.01, 0.05, 0.1, 0.25, 0.45], [2, 4, 10], trials=56, seed=2019,
        )
        assert len(reports) == 6 * 3 * 56 * 5
        per_bound = Counter(r.theorem for r in reports)
        assert set(per_bound) == {"thm-a1", "thm-a2", "issue3-pe", "issue3-fano", "issue3-cap"}
        assert min(per_bound.values()) >= 1000
        assert summarize(reports)["violated"] == 0

    def test_mi_diff_on_rate_grid(self) -> None:
        reports = sweep("a3", [0.01, 0.1], [2], trials=2, seed=2019)
        # eleven compression levels per trial
        assert len(reports) == 2 * 2 * 11
        assert summarize(reports)["violated"] == 0

    def test_lagrangian_sandwich(self) -> None:
        reports = sweep(
            "a4", [0.005, 0.01, 0.05, 0.1, 0.25, 0.45], [2, 4, 10], trials=5, seed=7,
            cfg=SolverConfig(restarts=5, seed=7),
        )
        assert len(reports) == 6 * 3 * 5 * 3 * 2
        counts = summarize(reports)
        assert counts["violated"] == 0
        assert counts["inconclusive"] / len(reports) < 0.05


class TestIssueThree:
    """Layers that predict perfectly cannot trade prediction for compression."""

    def test_two_stage_chain(self, hundred: JointXY) -> None:
        f = [x // 10 for x in range(100)]
        # stage 1 keeps the class and the input's parity, stage 2 keeps the class
        stage1 = Encoder.from_assignment([2 * c + x % 2 for x, c in enumerate(f)], 20)
        stage2 = Encoder.from_assignment([t // 2 for t in range(20)], 10)
        chain = LayerChain((stage1, stage2))
        assert point_prediction_error(hundred, chain) == pytest.approx(0.0, abs=1e-12)
        first, second = chain_evaluate(hundred, chain)
        assert first.i_yt == pytest.approx(hundred.h_y, abs=1e-9)
        assert second.i_yt == pytest.approx(hundred.h_y, abs=1e-9)
        assert second.i_xt <= first.i_xt + 1e-12
        assert first.i_xt == pytest.approx(hundred.h_y + LN2, abs=1e-9)

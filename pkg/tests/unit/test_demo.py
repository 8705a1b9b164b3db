"""
Tests for the Demonstration Run
===============================

Verifies:
1. The demo joint is deterministic with uniform classes
2. A small run writes the plane CSV and the summary
3. The summary's chain and cap numbers
"""

import csv
import math
from pathlib import Path

import pytest

from ibplane.bounds import entropy_continuity_bound
from ibplane.core import is_deterministic
from ibplane.demo import PLANE_FILE, SUMMARY_FILE, DemoSummary, demo_joint, run_demo
from ibplane.errors import InvalidInputError
from ibplane.solvers import SolverConfig


class TestDemoJoint:
    """Inputs spread evenly over uniform classes."""

    def test_shape(self) -> None:
        joint = demo_joint(3, 2)
        assert (joint.n_x, joint.n_y) == (6, 3)
        assert is_deterministic(joint).f == (0, 0, 1, 1, 2, 2)
        assert joint.h_y == pytest.approx(math.log(3))

    @pytest.mark.parametrize("classes,per_class", [(1, 5), (3, 0)])
    def test_invalid(self, classes: int, per_class: int) -> None:
        with pytest.raises(InvalidInputError):
            demo_joint(classes, per_class)


class TestRunDemo:
    """End-to-end on a tiny joint."""

    @pytest.fixture
    def summary(self, tmp_path: Path) -> DemoSummary:
        return run_demo(tmp_path, classes=2, inputs_per_class=2, cfg=SolverConfig(restarts=2, seed=1), workers=1)

    def test_outputs(self, tmp_path: Path, summary: DemoSummary) -> None:
        assert summary.outputs == [tmp_path / PLANE_FILE, tmp_path / SUMMARY_FILE]
        with (tmp_path / PLANE_FILE).open(encoding="utf-8") as f:
            rows = list(csv.DictReader(f))
        sources = {r["source"] for r in rows}
        assert sources == {"ib-lagrangian", "squared-ib", "t-alpha", "dib-envelope"}
        assert sum(r["source"] == "t-alpha" for r in rows) == 11
        for r in rows:
            assert float(r["i_yt"]) <= float(r["i_xt"]) + 1e-9

    def test_chain(self, summary: DemoSummary) -> None:
        assert summary.inputs == 4
        assert summary.chain_error == pytest.approx(0.0, abs=1e-12)
        assert summary.chain_drop == pytest.approx(0.0, abs=1e-12)
        assert summary.cap == pytest.approx(entropy_continuity_bound(0.1, 2))

    def test_oracle_falls_back_to_two_outputs(self, summary: DemoSummary) -> None:
        assert summary.oracle_excess is not None

    def test_summary_text(self, tmp_path: Path, summary: DemoSummary) -> None:
        text = (tmp_path / SUMMARY_FILE).read_text(encoding="utf-8")
        assert text == summary.to_text()
        assert "4 inputs, 2 uniform classes" in text
        assert "grid oracle" in text

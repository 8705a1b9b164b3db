"""
Tests for β Scans and Scan Files
================================

Verifies:
1. β grid construction and lo:hi:n parsing
2. Grid validation (empty, non-increasing, negative)
3. Points come back in grid order, one per β, reproducibly
4. A failing or crashing point is recorded as FAILED, the rest survive
5. CSV round trip and the JSON payload with encoders
6. Process pool and serial runs agree
"""

import importlib
import json
import math
from pathlib import Path

import pytest

from ibplane.core import JointXY, Objective
from ibplane.errors import InvalidInputError, ParseError
from ibplane.solvers import (
    PointStatus,
    ScanResult,
    SolverConfig,
    beta_grid,
    parse_grid_spec,
    read_scan_csv,
    scan,
    write_scan_csv,
    write_scan_json,
)
from ibplane.solvers.protocol import ScanPoint
from ibplane.solvers.scan import SCAN_COLUMNS, scan_payload, scan_to_csv

# the package re-exports the scan function under the submodule name
scan_mod = importlib.import_module("ibplane.solvers.scan")


class TestBetaGrid:
    """Grid helpers."""

    def test_linear(self) -> None:
        assert beta_grid(0.1, 0.9, 9) == pytest.approx([0.1 * k for k in range(1, 10)])

    def test_log(self) -> None:
        grid = beta_grid(0.1, 10.0, 3, log=True)
        assert grid == pytest.approx([0.1, 1.0, 10.0])

    def test_single_point(self) -> None:
        assert beta_grid(0.5, 0.5, 1) == [0.5]

    def test_empty(self) -> None:
        with pytest.raises(InvalidInputError, match="at least one"):
            beta_grid(0.1, 0.9, 0)

    def test_log_needs_positive_lo(self) -> None:
        with pytest.raises(InvalidInputError):
            beta_grid(0.0, 1.0, 5, log=True)

    def test_reversed_range(self) -> None:
        with pytest.raises(InvalidInputError):
            beta_grid(0.9, 0.1, 5)

    def test_parse_spec(self) -> None:
        assert parse_grid_spec("0.1:5:15", log=True)[-1] == pytest.approx(5.0)
        assert len(parse_grid_spec("0.1:0.9:9")) == 9

    @pytest.mark.parametrize("spec", ["1:2", "a:b:c", "0.1:0.9:2.5", ""])
    def test_bad_spec(self, spec: str) -> None:
        with pytest.raises(InvalidInputError):
            parse_grid_spec(spec)


class TestScan:
    """Driving a solver over a β grid."""

    @pytest.fixture
    def cfg(self) -> SolverConfig:
        return SolverConfig(restarts=2, seed=11)

    def test_grid_order(self, uniform4: JointXY, cfg: SolverConfig) -> None:
        betas = [0.1, 0.5, 0.9]
        result = scan(uniform4, Objective.IB_LAGRANGIAN, betas, cfg, workers=1)
        assert result.betas == betas
        assert result.objective is Objective.IB_LAGRANGIAN
        assert result.fingerprint == uniform4.fingerprint()
        assert result.failed == 0
        for point in result.points:
            assert point.result is not None
            assert point.result.beta == point.beta

    def test_reproducible(self, uniform4: JointXY, cfg: SolverConfig) -> None:
        a = scan(uniform4, "squared-ib", [0.5, 2.0], cfg, workers=1)
        b = scan(uniform4, "squared-ib", [0.5, 2.0], cfg, workers=1)
        assert scan_to_csv(a) == scan_to_csv(b)

    @pytest.mark.slow
    def test_pool_matches_serial(self, uniform4: JointXY, cfg: SolverConfig) -> None:
        betas = [0.2, 0.6, 1.5, 3.0]
        serial = scan(uniform4, "squared-ib", betas, cfg, workers=1)
        pooled = scan(uniform4, "squared-ib", betas, cfg, workers=2)
        assert scan_to_csv(serial) == scan_to_csv(pooled)

    @pytest.mark.parametrize("betas", [[], [0.5, 0.5], [0.9, 0.1], [-0.1, 0.2], [0.1, math.inf]])
    def test_invalid_grid(self, uniform4: JointXY, cfg: SolverConfig, betas: list[float]) -> None:
        with pytest.raises(InvalidInputError):
            scan(uniform4, "dib", betas, cfg, workers=1)

    def test_failed_point(
        self, uniform4: JointXY, cfg: SolverConfig, monkeypatch: pytest.MonkeyPatch
    ) -> None:
        real = scan_mod.solve

        def flaky(joint, objective, c):  # type: ignore[no-untyped-def]
            if c.beta == 0.5:
                raise InvalidInputError("synthetic failure")
            return real(joint, objective, c)

        monkeypatch.setattr(scan_mod, "solve", flaky)
        result = scan(uniform4, "dib", [0.2, 0.5, 2.0], cfg, workers=1)
        assert [p.status for p in result.points][1] is PointStatus.FAILED
        assert result.points[1].error == "synthetic failure"
        assert result.failed == 1
        assert len(result.successful) == 2

        rows = scan_to_csv(result).splitlines()
        assert rows[2].split(",")[1:5] == ["nan"] * 4
        assert rows[2].endswith(",0,false,-1,failed")

    def test_crashing_point_does_not_stop_serial_scan(
        self, uniform4: JointXY, cfg: SolverConfig, monkeypatch: pytest.MonkeyPatch
    ) -> None:
        real = scan_mod.solve

        def crashing(joint, objective, c):  # type: ignore[no-untyped-def]
            if c.beta == 0.2:
                raise ZeroDivisionError("division by zero")
            return real(joint, objective, c)

        monkeypatch.setattr(scan_mod, "solve", crashing)
        result = scan(uniform4, "ib-lagrangian", [0.2, 0.5, 0.8], cfg, workers=1)
        assert [p.status for p in result.points][0] is PointStatus.FAILED
        assert "ZeroDivisionError" in (result.points[0].error or "")
        assert result.failed == 1
        assert [r.beta for r in result.successful] == [0.5, 0.8]

    def test_result_requires_increasing(self) -> None:
        points = tuple(ScanPoint(b, PointStatus.FAILED) for b in (0.5, 0.1))
        with pytest.raises(InvalidInputError):
            ScanResult(points, Objective.DIB, "x")


class TestScanFiles:
    """Scan CSV and JSON."""

    @pytest.fixture
    def result(self, uniform4: JointXY) -> ScanResult:
        return scan(uniform4, "squared-dib", [0.25, 0.75], SolverConfig(restarts=2, seed=1), workers=1)

    def test_header(self, result: ScanResult) -> None:
        assert scan_to_csv(result).splitlines()[0] == ",".join(SCAN_COLUMNS)

    def test_csv_round_trip(self, tmp_path: Path, result: ScanResult) -> None:
        path = write_scan_csv(result, tmp_path / "scan.csv")
        records = read_scan_csv(path)
        assert [r.beta for r in records] == [0.25, 0.75]
        for rec, point in zip(records, result.points):
            assert point.result is not None
            assert rec.i_xt == pytest.approx(point.result.report.i_xt, rel=1e-11)
            assert rec.converged == point.result.converged
            assert rec.status is point.status
        assert write_scan_csv(records, tmp_path / "again.csv").read_text() == path.read_text()

    def test_bad_header(self, tmp_path: Path) -> None:
        path = tmp_path / "scan.csv"
        path.write_text("beta,i_xt\n0.1,0.2\n", encoding="utf-8")
        with pytest.raises(ParseError):
            read_scan_csv(path)

    def test_bad_bool(self, tmp_path: Path, result: ScanResult) -> None:
        text = scan_to_csv(result).replace(",true,", ",yes,").replace(",false,", ",yes,")
        path = tmp_path / "scan.csv"
        path.write_text(text, encoding="utf-8")
        with pytest.raises(ParseError) as info:
            read_scan_csv(path)
        assert info.value.row == 2

    def test_json_with_encoders(self, tmp_path: Path, result: ScanResult, uniform4: JointXY) -> None:
        path = write_scan_json(result, tmp_path / "scan.json", include_encoders=True, x_labels=uniform4.x_labels)
        data = json.loads(path.read_text())
        assert data["objective"] == "squared-dib"
        assert len(data["points"]) == 2
        enc = data["points"][0]["encoder"]
        assert enc["x_labels"] == list(uniform4.x_labels)
        assert len(enc["q"]) == 4

    def test_json_without_encoders(self, result: ScanResult) -> None:
        payload = scan_payload(result)
        assert "encoder" not in payload["points"][0]

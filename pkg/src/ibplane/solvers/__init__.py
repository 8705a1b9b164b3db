"""Iterative solvers for the four bottleneck functionals, β scans and exhaustive oracles."""

from ibplane.core.pareto import front_value, pareto_upper_left
from ibplane.solvers.deterministic import solve_dib, solve_squared_dib
from ibplane.solvers.lagrangian import solve_ib_lagrangian, solve_squared_ib
from ibplane.solvers.oracle import brute_force_front, hard_cluster_front, solver_front
from ibplane.solvers.protocol import PointStatus, ScanPoint, ScanResult, SolveResult, SolverConfig
from ibplane.solvers.restarts import best_result, derive_seeds
from ibplane.solvers.runner import run_restarts, solve
from ibplane.solvers.scan import (
    ScanRecord,
    beta_grid,
    parse_grid_spec,
    read_scan_csv,
    scan,
    write_scan_csv,
    write_scan_json,
)

__all__ = [
    "PointStatus",
    "ScanPoint",
    "ScanRecord",
    "ScanResult",
    "SolveResult",
    "SolverConfig",
    "best_result",
    "beta_grid",
    "brute_force_front",
    "derive_seeds",
    "front_value",
    "hard_cluster_front",
    "pareto_upper_left",
    "parse_grid_spec",
    "read_scan_csv",
    "run_restarts",
    "scan",
    "solve",
    "solve_dib",
    "solve_ib_lagrangian",
    "solve_squared_dib",
    "solve_squared_ib",
    "solver_front",
    "write_scan_csv",
    "write_scan_json",
]

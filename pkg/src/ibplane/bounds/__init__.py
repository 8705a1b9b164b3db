"""Perturbation bounds for near-deterministic joints and their empirical checks."""

from ibplane.bounds.formulas import (
    bound_cond_entropy,
    bound_mi_diff,
    entropy_continuity_bound,
    gamma,
)
from ibplane.bounds.perturbation import PerturbationSample, perturb_joint, random_deterministic_joint
from ibplane.bounds.report import BoundReport, Verdict, summarize, write_bound_csv
from ibplane.bounds.theorems import (
    THEOREMS,
    parse_theorems,
    sweep,
    verify_entropy_continuity,
    verify_issue3_fano,
    verify_thm_a1_a2,
    verify_thm_a3,
    verify_thm_a4,
    verify_thm_a5,
)

__all__ = [
    "THEOREMS",
    "BoundReport",
    "PerturbationSample",
    "Verdict",
    "bound_cond_entropy",
    "bound_mi_diff",
    "entropy_continuity_bound",
    "gamma",
    "parse_theorems",
    "perturb_joint",
    "random_deterministic_joint",
    "summarize",
    "sweep",
    "verify_entropy_continuity",
    "verify_issue3_fano",
    "verify_thm_a1_a2",
    "verify_thm_a3",
    "verify_thm_a4",
    "verify_thm_a5",
    "write_bound_csv",
]

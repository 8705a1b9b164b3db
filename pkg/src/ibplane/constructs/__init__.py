"""Closed-form constructions for deterministic joints Y = f(X)."""

from ibplane.constructs.deterministic import (
    AlphaFamily,
    HardClustering,
    alpha_for_rate,
    alpha_sweep,
    deterministic_curve,
    dib_envelope,
    enumerate_hard_clusterings,
    evaluate_clusterings,
    hard_clustering_encoder,
    t_alpha_encoder,
    t_copy_encoder,
    trivial_solution_family,
)
from ibplane.constructs.partitions import bell_number, restricted_growth_strings

__all__ = [
    "AlphaFamily",
    "HardClustering",
    "alpha_for_rate",
    "alpha_sweep",
    "bell_number",
    "deterministic_curve",
    "dib_envelope",
    "enumerate_hard_clusterings",
    "evaluate_clusterings",
    "hard_clustering_encoder",
    "restricted_growth_strings",
    "t_alpha_encoder",
    "t_copy_encoder",
    "trivial_solution_family",
]

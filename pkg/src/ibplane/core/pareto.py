"""Upper-left Pareto sets on the information plane.

Points are (compression, prediction) pairs; a point dominates another when it
compresses at least as much (smaller first coordinate) while predicting at
least as well. Comparisons use a 1e-9 tolerance.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from typing import Final

PARETO_TOL: Final[float] = 1e-9


def pareto_upper_left(
    points: Iterable[tuple[float, float]], tol: float = PARETO_TOL
) -> list[tuple[float, float]]:
    """Non-dominated points, sorted by increasing compression.

    Duplicates within *tol* collapse onto the first (smallest-compression) one.
    """
    ordered = sorted(points, key=lambda p: (p[0], -p[1]))
    front: list[tuple[float, float]] = []
    best = float("-inf")
    for c, v in ordered:
        if v > best + tol:
            front.append((float(c), float(v)))
            best = v
    return front


def front_value(front: Sequence[tuple[float, float]], r: float, tol: float = PARETO_TOL) -> float:
    """Best prediction reachable at compression ≤ r (0 when nothing qualifies).

    Beyond the last point the front stays flat, which makes this the
    empirical F(r) of a brute-force or solver front.
    """
    best = 0.0
    for c, v in front:
        if c <= r + tol and v > best:
            best = v
    return best

"""Bound check results and their CSV form."""

from __future__ import annotations

import csv
import io
from collections import Counter
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Final

from ibplane.config import get_config
from ibplane.core.formats import format_number

# Margins down to this are still counted as holding
MARGIN_TOL: Final[float] = 1e-9

SOLVER_SUBOPTIMAL: Final[str] = "inconclusive (solver suboptimality)"

BOUND_COLUMNS: Final[tuple[str, ...]] = (
    "theorem", "epsilon_target", "epsilon_actual", "y_card",
    "measured", "bound", "margin", "holds", "verdict", "notes",
)


class Verdict(str, Enum):
    """Outcome of one bound check."""
    HOLDS = "holds"
    VIOLATED = "violated"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class BoundReport:
    """One inequality checked on one perturbation sample.

    ``margin`` is positive when the inequality has room to spare. An
    INCONCLUSIVE verdict marks a failed check that could stem from the
    optimiser rather than the inequality.
    """

    theorem: str
    epsilon_target: float
    epsilon_actual: float
    y_card: int
    measured: float
    bound: float
    margin: float
    verdict: Verdict
    notes: str = ""

    @property
    def holds(self) -> bool:
        return self.margin >= -MARGIN_TOL

    @classmethod
    def check(
        cls,
        theorem: str,
        epsilon_target: float,
        epsilon_actual: float,
        y_card: int,
        measured: float,
        bound: float,
        margin: float | None = None,
        notes: str = "",
        inconclusive_if_failed: bool = False,
    ) -> BoundReport:
        """Build a report for ``measured ≤ bound`` (or a caller-supplied margin)."""
        m = bound - measured if margin is None else margin
        if m >= -MARGIN_TOL:
            verdict = Verdict.HOLDS
        elif inconclusive_if_failed:
            verdict = Verdict.INCONCLUSIVE
        else:
            verdict = Verdict.VIOLATED
        return cls(theorem, epsilon_target, epsilon_actual, y_card, measured, bound, m, verdict, notes)


def summarize(reports: Iterable[BoundReport]) -> dict[str, int]:
    """Count of reports per verdict."""
    counts = Counter(r.verdict.value for r in reports)
    return {v.value: counts.get(v.value, 0) for v in Verdict}


def bound_csv(reports: Sequence[BoundReport], digits: int | None = None) -> str:
    d = get_config().output_digits if digits is None else digits
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(BOUND_COLUMNS)
    for r in reports:
        writer.writerow([
            r.theorem,
            format_number(r.epsilon_target, d),
            format_number(r.epsilon_actual, d),
            r.y_card,
            format_number(r.measured, d),
            format_number(r.bound, d),
            format_number(r.margin, d),
            "true" if r.holds else "false",
            r.verdict.value,
            r.notes,
        ])
    return buf.getvalue()


def write_bound_csv(reports: Sequence[BoundReport], path: Path | str, digits: int | None = None) -> Path:
    p = Path(path)
    p.write_text(bound_csv(reports, digits), encoding="utf-8")
    return p

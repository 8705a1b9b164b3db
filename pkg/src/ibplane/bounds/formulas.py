"""
Perturbation bound formulas
===========================

Closed-form slacks for a joint p that is ε-close in ℓ1 to a deterministic
joint p̃ with the same X marginal. ε must lie in [0, 1/2] and |Y| ≥ 2; at
ε = 0 every bound is 0 (0·ln 0 = 0).

    entropy_continuity_bound   −ε ln ε +  ε ln|Y|
    bound_cond_entropy         −ε ln ε + 3ε ln|Y|
    bound_mi_diff             −2ε ln ε + 4ε ln|Y|
    gamma                     −3ε ln ε + 5ε ln|Y|
"""

from __future__ import annotations

import math
from typing import Final

from scipy.special import xlogy

from ibplane.errors import InvalidInputError

MAX_EPSILON: Final[float] = 0.5


def check_epsilon(epsilon: float, y_card: int) -> None:
    """Raise ``InvalidInputError`` unless 0 ≤ ε ≤ 1/2 and |Y| ≥ 2."""
    if math.isnan(epsilon) or not 0.0 <= epsilon <= MAX_EPSILON:
        raise InvalidInputError(f"epsilon must lie in [0, 1/2], got {epsilon!r}")
    if y_card < 2:
        raise InvalidInputError(f"bounds need |Y| >= 2, got {y_card}")


def _slack(epsilon: float, y_card: int, log_weight: float, card_weight: float) -> float:
    check_epsilon(epsilon, y_card)
    return float(-log_weight * xlogy(epsilon, epsilon) + card_weight * epsilon * math.log(y_card))


def entropy_continuity_bound(epsilon: float, y_card: int) -> float:
    """−ε ln(ε/|Y|): how far H can move under an ℓ1 change of ε."""
    return _slack(epsilon, y_card, 1.0, 1.0)


def bound_cond_entropy(epsilon: float, y_card: int) -> float:
    """Bound on |H_p(Y|Z) − H_p̃(Y|Z)| for any Z sharing its marginal under both."""
    return _slack(epsilon, y_card, 1.0, 3.0)


def bound_mi_diff(epsilon: float, y_card: int) -> float:
    """Bound on |I_p(Y;Z) − I_p̃(Y;Z)|, and on the gap between the two IB curves."""
    return _slack(epsilon, y_card, 2.0, 4.0)


def gamma(epsilon: float, y_card: int) -> float:
    """Slack confining Lagrangian optima to the corner when p is near-deterministic."""
    return _slack(epsilon, y_card, 3.0, 5.0)

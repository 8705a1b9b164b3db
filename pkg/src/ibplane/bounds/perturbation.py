"""ε-perturbations of deterministic joints.

Row x of p̃ keeps its mass p(x); a fraction s_x of it leaves f(x) and is
spread over the other classes by a flat Dirichlet draw. The fractions are

    s_x = (ε/2) · u_x / Σ_x' p(x') u_x',   u ~ Uniform(0.5, 1.5)

so the moved mass totals ε/2, the ℓ1 distance is exactly ε and no row gives
up more than 3/4 of its mass.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Final

import numpy as np

from ibplane.bounds.formulas import MAX_EPSILON
from ibplane.core.distributions import JointXY, joint_from_function, require_deterministic
from ibplane.core.infotheory import l1_distance
from ibplane.errors import InvalidInputError

logger = logging.getLogger("ibplane.bounds.perturbation")

# Measured distances within this of the target are rounding noise
ROUNDING_TOL: Final[float] = 1e-12


@dataclass(frozen=True)
class PerturbationSample:
    """A deterministic base joint and an ε-perturbed copy with the same X marginal."""

    base: JointXY
    perturbed: JointXY
    epsilon_target: float
    epsilon_actual: float

    @property
    def f(self) -> tuple[int, ...]:
        return require_deterministic(self.base)

    @property
    def y_card(self) -> int:
        return self.base.n_y


def perturb_joint(base: JointXY, epsilon: float, seed: int | np.random.Generator | None = None) -> PerturbationSample:
    """Move ε/2 of the mass off the deterministic entries of *base*.

    Raises:
        PreconditionError: if *base* is not deterministic
        InvalidInputError: if ε is outside [0, 1/2], or ε > 0 with a single class
    """
    f = require_deterministic(base)
    if not 0.0 <= epsilon <= MAX_EPSILON:
        raise InvalidInputError(f"epsilon must lie in [0, 1/2], got {epsilon!r}")
    if epsilon == 0.0:
        return PerturbationSample(base, base, 0.0, 0.0)
    if base.n_y < 2:
        raise InvalidInputError("a single-class joint cannot be perturbed")

    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    p_x = base.marginal_x
    u = rng.uniform(0.5, 1.5, size=base.n_x)
    s = (epsilon / 2.0) * u / float(p_x @ u)

    p = np.zeros((base.n_x, base.n_y))
    others = base.n_y - 1
    for x, y in enumerate(f):
        w = rng.dirichlet(np.ones(others)) if others > 1 else np.ones(1)
        idx = [c for c in range(base.n_y) if c != y]
        p[x, idx] = p_x[x] * s[x] * w
        p[x, y] = p_x[x] * (1.0 - s[x])

    perturbed = JointXY(p / p.sum(), base.x_labels, base.y_labels)
    measured = l1_distance(base.p, perturbed.p)
    actual = epsilon if abs(measured - epsilon) <= ROUNDING_TOL else measured
    logger.debug("perturbation: target %.6g, measured %.6g", epsilon, measured)
    return PerturbationSample(base, perturbed, float(epsilon), float(actual))


def random_deterministic_joint(
    y_card: int, n_x: int | None = None, seed: int | np.random.Generator | None = None
) -> JointXY:
    """A deterministic joint with every class used and a Dirichlet X marginal."""
    if y_card < 1:
        raise InvalidInputError(f"need at least one class, got {y_card}")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    size = n_x if n_x is not None else 2 * y_card
    if size < y_card:
        raise InvalidInputError(f"{size} inputs cannot cover {y_card} classes")
    f = np.concatenate([np.arange(y_card), rng.integers(0, y_card, size=size - y_card)])
    f = rng.permutation(f)
    p_x = rng.dirichlet(np.ones(size))
    return joint_from_function([int(v) for v in f], p_x, y_card)

"""
Closed-form bottleneck variables for deterministic joints
=========================================================

When Y = f(X) the IB curve is min{r, H(Y)} and is traced out by simple
constructions:

- ``t_alpha_encoder``: T equals f(X) with probability α and an erasure symbol
  otherwise, giving I(X;T) = I(Y;T) = α·H(Y).
- ``t_copy_encoder``: T = f(X), the corner point ⟨H(Y), H(Y)⟩.
- ``hard_clustering_encoder``: T = g(f(X)) for a partition g of the classes,
  which lies on the line I(Y;T) = I(X;T) = H(T) (the dIB step curve).

All constructors raise ``PreconditionError`` on non-deterministic joints.
"""

from __future__ import annotations

import logging
from collections.abc import Iterator, Sequence
from dataclasses import dataclass
from typing import Final

import numpy as np
from numpy.typing import NDArray
from scipy.special import xlogy

from ibplane.constructs.partitions import restricted_growth_strings
from ibplane.core.distributions import (
    BottleneckReport,
    Encoder,
    JointXY,
    evaluate,
    require_deterministic,
)
from ibplane.core.pareto import pareto_upper_left
from ibplane.errors import InvalidInputError

logger = logging.getLogger("ibplane.constructs.deterministic")

ERASURE_LABEL: Final[str] = "erasure"

# Partitions evaluated per vectorised batch
_BATCH: Final[int] = 4096


# ---------------------------------------------------------------------------
# T_alpha family
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AlphaFamily:
    """T = f(X) with probability alpha, the erasure symbol otherwise."""

    alpha: float
    f: tuple[int, ...]
    n_classes: int

    def __post_init__(self) -> None:
        if not 0.0 <= self.alpha <= 1.0:
            raise InvalidInputError(f"alpha must lie in [0, 1], got {self.alpha!r}")

    @property
    def erasure_symbol(self) -> int:
        """Index of the erasure outcome (one past the last class)."""
        return self.n_classes

    def encoder(self, y_labels: Sequence[str] | None = None) -> Encoder:
        n_x = len(self.f)
        q = np.zeros((n_x, self.n_classes + 1))
        q[np.arange(n_x), list(self.f)] = self.alpha
        q[:, self.erasure_symbol] += 1.0 - self.alpha
        labels = tuple(y_labels) if y_labels is not None else tuple(f"y{i}" for i in range(self.n_classes))
        return Encoder(q, (*labels, ERASURE_LABEL))


def t_alpha_encoder(alpha: float, joint: JointXY) -> Encoder:
    """Erasure-channel bottleneck with I(X;T) = I(Y;T) = alpha·H(Y)."""
    f = require_deterministic(joint)
    return AlphaFamily(alpha, f, joint.n_y).encoder(joint.y_labels)


def t_copy_encoder(joint: JointXY) -> Encoder:
    """T = f(X); achieves (1 − β)·H(Y) under the IB Lagrangian."""
    f = require_deterministic(joint)
    return Encoder.from_assignment(f, joint.n_y, joint.y_labels)


def deterministic_curve(r: float, h_y: float) -> float:
    """The IB curve of a deterministic joint: F(r) = min{r, H(Y)}."""
    if r < 0 or h_y < 0:
        raise InvalidInputError(f"r and H(Y) must be non-negative, got r={r!r}, h_y={h_y!r}")
    return min(r, h_y)


def alpha_for_rate(r: float, h_y: float) -> float:
    """The alpha whose T_alpha sits at I(X;T) = min{r, H(Y)}."""
    if r < 0 or h_y < 0:
        raise InvalidInputError(f"r and H(Y) must be non-negative, got r={r!r}, h_y={h_y!r}")
    if h_y == 0.0:
        return 1.0
    return min(1.0, r / h_y)


def alpha_sweep(joint: JointXY, n: int) -> list[tuple[float, BottleneckReport]]:
    """Evaluate T_alpha on an evenly spaced grid of *n* alphas in [0, 1]."""
    if n < 2:
        raise InvalidInputError(f"alpha grid needs at least 2 points, got {n}")
    f = require_deterministic(joint)
    out = []
    for alpha in np.linspace(0.0, 1.0, n):
        enc = AlphaFamily(float(alpha), f, joint.n_y).encoder(joint.y_labels)
        out.append((float(alpha), evaluate(joint, enc)))
    return out


def trivial_solution_family(joint: JointXY, r: float) -> tuple[AlphaFamily, BottleneckReport]:
    """The T_alpha that attains the curve point at compression r.

    Every point of the deterministic IB curve is reached this way, by a
    variable that merely forgets its input at random.
    """
    f = require_deterministic(joint)
    alpha = alpha_for_rate(r, joint.h_y)
    family = AlphaFamily(alpha, f, joint.n_y)
    return family, evaluate(joint, family.encoder(joint.y_labels))


# ---------------------------------------------------------------------------
# Hard clusterings
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class HardClustering:
    """A map g from class index to cluster index, clusters numbered 0..k-1."""

    g: tuple[int, ...]

    def __post_init__(self) -> None:
        g = tuple(int(v) for v in self.g)
        if not g:
            raise InvalidInputError("a clustering needs at least one class")
        if set(g) != set(range(max(g) + 1)):
            raise InvalidInputError(f"cluster indices must be contiguous from 0, got {g}")
        object.__setattr__(self, "g", g)

    @property
    def n_classes(self) -> int:
        return len(self.g)

    @property
    def n_clusters(self) -> int:
        return max(self.g) + 1


def hard_clustering_encoder(c: HardClustering, joint: JointXY) -> Encoder:
    """T = g(f(X)), a deterministic function of Y."""
    f = require_deterministic(joint)
    if c.n_classes != joint.n_y:
        raise InvalidInputError(f"clustering covers {c.n_classes} classes, joint has {joint.n_y}")
    return Encoder.from_assignment([c.g[y] for y in f], c.n_clusters)


def enumerate_hard_clusterings(num_classes: int, max_classes: int | None = None) -> Iterator[HardClustering]:
    """All partitions of the class set, canonical restricted-growth order.

    Raises:
        ResourceLimitError: when num_classes exceeds the guard (default 12)
    """
    strings = restricted_growth_strings(num_classes, max_classes)
    return (HardClustering(s) for s in strings)


def _mi_batch(p_joint: NDArray[np.float64]) -> NDArray[np.float64]:
    """Mutual information of a stack of (rows × cols) joints."""
    def h(arr: NDArray[np.float64], axes: tuple[int, ...]) -> NDArray[np.float64]:
        return -xlogy(arr, arr).sum(axis=axes)

    return h(p_joint.sum(axis=2), (1,)) + h(p_joint.sum(axis=1), (1,)) - h(p_joint, (1, 2))


def evaluate_clusterings(
    joint: JointXY, labels: NDArray[np.int64]
) -> NDArray[np.float64]:
    """(h_t, i_xt, i_yt) for each row of *labels* (one RGS per row).

    Each quantity is computed from its own joint table: p(t) for H(T),
    p(x, t) for I(X;T) and p(y, t) for I(Y;T).
    """
    f = np.asarray(require_deterministic(joint), dtype=np.int64)
    n, n_y = labels.shape
    k = int(labels.max()) + 1 if labels.size else 1
    p_x = joint.marginal_x
    p_y = joint.marginal_y
    rows = np.arange(n)

    p_yt = np.zeros((n, n_y, k))
    for y in range(n_y):
        p_yt[rows, y, labels[:, y]] = p_y[y]
    p_xt = np.zeros((n, joint.n_x, k))
    for x in range(joint.n_x):
        p_xt[rows, x, labels[:, f[x]]] = p_x[x]

    p_t = p_yt.sum(axis=1)
    h_t = -xlogy(p_t, p_t).sum(axis=1)
    out = np.empty((n, 3))
    out[:, 0] = h_t
    out[:, 1] = np.maximum(_mi_batch(p_xt), 0.0)
    out[:, 2] = np.maximum(_mi_batch(p_yt), 0.0)
    return out


def iter_clustering_batches(
    joint: JointXY, max_classes: int | None = None
) -> Iterator[tuple[list[tuple[int, ...]], NDArray[np.float64]]]:
    """Yield (partitions, evaluations) in batches across every hard clustering."""
    require_deterministic(joint)
    strings = restricted_growth_strings(joint.n_y, max_classes)
    batch: list[tuple[int, ...]] = []
    for s in strings:
        batch.append(s)
        if len(batch) == _BATCH:
            yield batch, evaluate_clusterings(joint, np.asarray(batch, dtype=np.int64))
            batch = []
    if batch:
        yield batch, evaluate_clusterings(joint, np.asarray(batch, dtype=np.int64))


def dib_envelope(joint: JointXY, max_classes: int | None = None) -> list[tuple[float, float]]:
    """Upper-left envelope of all hard clusterings on the (H(T), I(Y;T)) plane.

    The step curve continues flat at H(Y) beyond the last point; use
    ``ibplane.core.pareto.front_value`` to read it at an arbitrary H(T).
    """
    points: list[tuple[float, float]] = []
    for _, evals in iter_clustering_batches(joint, max_classes):
        batch_pts = [(float(h), float(i)) for h, i in zip(evals[:, 0], evals[:, 2])]
        points = pareto_upper_left(points + batch_pts)
    logger.debug("dIB envelope has %d points", len(points))
    return points

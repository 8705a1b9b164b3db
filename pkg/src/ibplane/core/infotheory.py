"""
Information-theoretic primitives
================================

Exact entropies, divergences and mutual informations over finite discrete
distributions. All quantities are in nats and use 0·ln 0 = 0; entries below
``ZERO_FLOOR`` are treated as exact zeros before any logarithm is taken.

Public functions validate their inputs and raise ``InvalidInputError``; the
underscore-prefixed helpers skip validation and are used inside solver loops.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Final, TypeAlias

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy.special import rel_entr, xlogy

from ibplane.errors import InvalidInputError

ProbVector: TypeAlias = NDArray[np.float64]
CondMatrix: TypeAlias = NDArray[np.float64]

# Absolute tolerance on total probability mass
MASS_TOL: Final[float] = 1e-12

# Entries below this are exact zeros for logarithms
ZERO_FLOOR: Final[float] = 1e-15


# ---------------------------------------------------------------------------
# Validation
# ---------------------------------------------------------------------------

def as_prob_vector(p: ArrayLike, name: str = "distribution") -> ProbVector:
    """Return *p* as a float vector after checking it is a distribution."""
    arr = np.asarray(p, dtype=np.float64)
    if arr.ndim != 1:
        raise InvalidInputError(f"{name} must be one-dimensional, got shape {arr.shape}")
    if arr.size == 0:
        raise InvalidInputError(f"{name} has dimension 0")
    if not np.all(np.isfinite(arr)):
        raise InvalidInputError(f"{name} contains non-finite entries")
    negative = np.flatnonzero(arr < 0)
    if negative.size:
        raise InvalidInputError(f"{name} has a negative entry at index {int(negative[0])}")
    total = float(arr.sum())
    if abs(total - 1.0) > MASS_TOL:
        raise InvalidInputError(f"{name} sums to {total!r}, expected 1")
    return arr


def as_joint(joint: ArrayLike, name: str = "joint") -> NDArray[np.float64]:
    """Return *joint* as a float matrix after checking it is a distribution."""
    arr = np.asarray(joint, dtype=np.float64)
    if arr.ndim != 2 or arr.size == 0:
        raise InvalidInputError(f"{name} must be a non-empty matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise InvalidInputError(f"{name} contains non-finite entries")
    if np.any(arr < 0):
        r, c = np.argwhere(arr < 0)[0]
        raise InvalidInputError(f"{name} has a negative entry at ({int(r)}, {int(c)})")
    total = float(arr.sum())
    if abs(total - 1.0) > MASS_TOL:
        raise InvalidInputError(f"{name} has total mass {total!r}, expected 1")
    return arr


def as_cond_matrix(m: ArrayLike, name: str = "conditional") -> CondMatrix:
    """Return *m* as a row-stochastic matrix after checking every row."""
    arr = np.asarray(m, dtype=np.float64)
    if arr.ndim != 2 or arr.size == 0:
        raise InvalidInputError(f"{name} must be a non-empty matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)) or np.any(arr < 0):
        raise InvalidInputError(f"{name} must have finite non-negative entries")
    sums = arr.sum(axis=1)
    bad = np.flatnonzero(np.abs(sums - 1.0) > MASS_TOL)
    if bad.size:
        row = int(bad[0])
        raise InvalidInputError(f"{name} row {row} sums to {float(sums[row])!r}, expected 1")
    return arr


# ---------------------------------------------------------------------------
# Unchecked kernels
# ---------------------------------------------------------------------------

def _clean(p: NDArray[np.float64]) -> NDArray[np.float64]:
    return np.where(p < ZERO_FLOOR, 0.0, p)


def _entropy(p: NDArray[np.float64]) -> float:
    """-Σ p ln p over every entry of *p*, any shape."""
    q = _clean(p)
    return float(-xlogy(q, q).sum())


def _mutual_information(joint: NDArray[np.float64]) -> float:
    h_rows = _entropy(joint.sum(axis=1))
    h_cols = _entropy(joint.sum(axis=0))
    mi = h_rows + h_cols - _entropy(joint)
    return max(0.0, mi)


# ---------------------------------------------------------------------------
# Public operations
# ---------------------------------------------------------------------------

def entropy(p: ArrayLike) -> float:
    """Shannon entropy of a distribution, in nats."""
    return _entropy(as_prob_vector(p))


def joint_entropy(joint: ArrayLike) -> float:
    """Entropy of a matrix-shaped joint distribution, in nats."""
    return _entropy(as_joint(joint))


def binary_entropy(x: float) -> float:
    """ℋ(x) = -x ln x - (1-x) ln(1-x)."""
    if not 0.0 <= x <= 1.0 or math.isnan(x):
        raise InvalidInputError(f"binary entropy argument must lie in [0, 1], got {x!r}")
    return float(-xlogy(x, x) - xlogy(1.0 - x, 1.0 - x))


def kl_divergence(p: ArrayLike, q: ArrayLike) -> float:
    """D_KL(p‖q) in nats; +inf when p is not absolutely continuous w.r.t. q."""
    pv = as_prob_vector(p, "p")
    qv = as_prob_vector(q, "q")
    if pv.shape != qv.shape:
        raise InvalidInputError(f"dimension mismatch: {pv.shape} vs {qv.shape}")
    pv, qv = _clean(pv), _clean(qv)
    support = pv > 0
    if np.any(qv[support] == 0):
        return math.inf
    value = float(np.sum(pv[support] * (np.log(pv[support]) - np.log(qv[support]))))
    return max(0.0, value)


def mutual_information(joint: ArrayLike) -> float:
    """I(row; column) of a joint distribution matrix, in nats."""
    return _mutual_information(as_joint(joint))


def conditional_entropy(joint: ArrayLike) -> float:
    """H(column | row) = H(joint) - H(row marginal)."""
    arr = as_joint(joint)
    return max(0.0, _entropy(arr) - _entropy(arr.sum(axis=1)))


def l1_distance(a: ArrayLike, b: ArrayLike) -> float:
    """Σ |a_i - b_i| over arrays of identical shape."""
    av = np.asarray(a, dtype=np.float64)
    bv = np.asarray(b, dtype=np.float64)
    if av.shape != bv.shape:
        raise InvalidInputError(f"shape mismatch: {av.shape} vs {bv.shape}")
    return float(np.abs(av - bv).sum())


def fano_bound(p_err: float, num_classes: int) -> float:
    """Fano upper bound ℋ(P_e) + P_e ln(m - 1) on H(Y | Ŷ)."""
    if num_classes < 2:
        raise InvalidInputError(f"Fano bound needs at least 2 classes, got {num_classes}")
    return binary_entropy(p_err) + p_err * math.log(num_classes - 1)


@dataclass(frozen=True)
class CrossEntropyTerms:
    """Cross-entropy loss split into conditional entropy and decoder KL."""

    ce_loss: float
    cond_entropy: float
    kl_term: float


def cross_entropy_decomposition(
    posterior: ArrayLike,
    decoder: ArrayLike,
    t_marginal: ArrayLike,
) -> CrossEntropyTerms:
    """Split E_t[-Σ_y p(y|t) ln q(y|t)] into H(Y|T) + E_t[D_KL(p(·|t)‖q(·|t))].

    Rows with zero t mass do not contribute.
    """
    post = as_cond_matrix(posterior, "posterior")
    dec = as_cond_matrix(decoder, "decoder")
    p_t = as_prob_vector(t_marginal, "t marginal")
    if post.shape != dec.shape:
        raise InvalidInputError(f"posterior {post.shape} and decoder {dec.shape} differ")
    if p_t.shape[0] != post.shape[0]:
        raise InvalidInputError(
            f"t marginal has {p_t.shape[0]} entries, posterior has {post.shape[0]} rows"
        )
    live = _clean(p_t) > 0
    post, dec, w = _clean(post[live]), _clean(dec[live]), p_t[live]

    row_h = -xlogy(post, post).sum(axis=1)
    cond_h = float(w @ row_h)
    if np.any((post > 0) & (dec == 0)):
        return CrossEntropyTerms(ce_loss=math.inf, cond_entropy=cond_h, kl_term=math.inf)
    ce = float(w @ -xlogy(post, dec).sum(axis=1))
    kl = float(w @ rel_entr(post, dec).sum(axis=1))
    return CrossEntropyTerms(ce_loss=ce, cond_entropy=cond_h, kl_term=max(0.0, kl))

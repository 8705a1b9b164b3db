"""
Joint distributions, encoders and the information plane
=======================================================

``JointXY`` holds a finite p(x, y); ``Encoder`` holds a row-stochastic
q(t|x). ``evaluate`` places the bottleneck variable T on the information
plane, ``objective_value`` scores a point under one of the four functionals,
and ``LayerChain`` evaluates a Markov chain of encoders X → T1 → ... → Tk.

Usage:
    joint = joint_from_function([0, 1, 2, 3], [0.25] * 4)
    report = evaluate(joint, Encoder.identity(4))
    objective_value(report, Objective.SQUARED_IB, beta=1.0)
"""

from __future__ import annotations

import hashlib
import logging
from collections.abc import Sequence
from dataclasses import dataclass, field
from enum import Enum
from typing import Final

import numpy as np
from numpy.typing import ArrayLike, NDArray

from ibplane.core.infotheory import (
    MASS_TOL,
    _entropy,
    _mutual_information,
    as_cond_matrix,
    as_joint,
    as_prob_vector,
)
from ibplane.errors import InvalidInputError, InvariantError, PreconditionError

logger = logging.getLogger("ibplane.core.distributions")

# Tolerance on information-plane invariants (DPI, entropy caps)
PLANE_TOL: Final[float] = 1e-9

# Entries at or below this count as zero when testing determinism
DETERMINISM_TOL: Final[float] = 1e-12


def _frozen(arr: NDArray[np.float64]) -> NDArray[np.float64]:
    out = np.array(arr, dtype=np.float64, copy=True)
    out.setflags(write=False)
    return out


def _default_labels(prefix: str, n: int) -> tuple[str, ...]:
    return tuple(f"{prefix}{i}" for i in range(n))


# ---------------------------------------------------------------------------
# Objectives
# ---------------------------------------------------------------------------

class Objective(str, Enum):
    """The four bottleneck functionals (all maximised)."""

    IB_LAGRANGIAN = "ib-lagrangian"
    SQUARED_IB = "squared-ib"
    DIB = "dib"
    SQUARED_DIB = "squared-dib"

    @classmethod
    def parse(cls, tag: str | Objective) -> Objective:
        """Accept both ``squared-ib`` and ``squared_ib`` spellings."""
        if isinstance(tag, Objective):
            return tag
        try:
            return cls(str(tag).strip().lower().replace("_", "-"))
        except ValueError:
            valid = ", ".join(o.value for o in cls)
            raise InvalidInputError(f"unknown objective {tag!r} (expected one of {valid})") from None

    @property
    def uses_entropy(self) -> bool:
        """True when the compression term is H(T) rather than I(X;T)."""
        return self in (Objective.DIB, Objective.SQUARED_DIB)

    @property
    def is_squared(self) -> bool:
        return self in (Objective.SQUARED_IB, Objective.SQUARED_DIB)


# ---------------------------------------------------------------------------
# Domain types
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class JointXY:
    """A finite joint distribution p(x, y) with no zero-mass x rows.

    Use ``JointXY.from_matrix`` to build one from raw data; it prunes
    zero-probability x outcomes before validation.
    """

    p: NDArray[np.float64]
    x_labels: tuple[str, ...] = ()
    y_labels: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        arr = as_joint(self.p)
        n_x, n_y = arr.shape
        empty = np.flatnonzero(arr.sum(axis=1) <= 0.0)
        if empty.size:
            raise InvalidInputError(f"x row {int(empty[0])} has zero mass; prune it first")
        x_labels = tuple(self.x_labels) or _default_labels("x", n_x)
        y_labels = tuple(self.y_labels) or _default_labels("y", n_y)
        if len(x_labels) != n_x or len(y_labels) != n_y:
            raise InvalidInputError(
                f"label counts ({len(x_labels)}, {len(y_labels)}) do not match shape {arr.shape}"
            )
        object.__setattr__(self, "p", _frozen(arr))
        object.__setattr__(self, "x_labels", x_labels)
        object.__setattr__(self, "y_labels", y_labels)

    @classmethod
    def from_matrix(
        cls,
        p: ArrayLike,
        x_labels: Sequence[str] | None = None,
        y_labels: Sequence[str] | None = None,
    ) -> JointXY:
        """Validate *p*, drop zero-mass rows and build a JointXY."""
        arr = as_joint(p)
        xl = tuple(x_labels) if x_labels is not None else _default_labels("x", arr.shape[0])
        yl = tuple(y_labels) if y_labels is not None else _default_labels("y", arr.shape[1])
        if len(xl) != arr.shape[0]:
            raise InvalidInputError(f"{len(xl)} x labels for {arr.shape[0]} rows")
        keep = arr.sum(axis=1) > 0.0
        if not np.all(keep):
            logger.debug("Pruning %d zero-mass x rows", int((~keep).sum()))
        return cls(arr[keep], tuple(l for l, k in zip(xl, keep) if k), yl)

    @property
    def n_x(self) -> int:
        return int(self.p.shape[0])

    @property
    def n_y(self) -> int:
        return int(self.p.shape[1])

    @property
    def marginal_x(self) -> NDArray[np.float64]:
        return self.p.sum(axis=1)

    @property
    def marginal_y(self) -> NDArray[np.float64]:
        return self.p.sum(axis=0)

    @property
    def conditional(self) -> NDArray[np.float64]:
        """p(y|x), one row per x."""
        return self.p / self.marginal_x[:, None]

    @property
    def h_y(self) -> float:
        return _entropy(self.marginal_y)

    @property
    def mutual_information(self) -> float:
        """I(X;Y) of the joint itself."""
        return _mutual_information(self.p)

    def fingerprint(self, digits: int = 12) -> str:
        """SHA-256 over the matrix rendered at *digits* significant digits."""
        text = ";".join(",".join(f"{v:.{digits}g}" for v in row) for row in self.p)
        payload = f"{self.n_x}x{self.n_y}|{text}"
        return hashlib.sha256(payload.encode("utf-8")).hexdigest()


@dataclass(frozen=True)
class Encoder:
    """A stochastic map q(t|x), one probability row per x outcome."""

    q: NDArray[np.float64]
    t_labels: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        arr = as_cond_matrix(self.q, "encoder")
        labels = tuple(self.t_labels) or _default_labels("t", arr.shape[1])
        if len(labels) != arr.shape[1]:
            raise InvalidInputError(f"{len(labels)} t labels for {arr.shape[1]} columns")
        object.__setattr__(self, "q", _frozen(arr))
        object.__setattr__(self, "t_labels", labels)

    @property
    def n_in(self) -> int:
        return int(self.q.shape[0])

    @property
    def n_t(self) -> int:
        return int(self.q.shape[1])

    @property
    def is_hard(self) -> bool:
        """True when every row is one-hot."""
        return bool(np.all(np.isclose(self.q.max(axis=1), 1.0, atol=DETERMINISM_TOL)))

    @classmethod
    def identity(cls, n: int) -> Encoder:
        return cls(np.eye(n))

    @classmethod
    def constant(cls, n_in: int, n_t: int = 1) -> Encoder:
        """All mass on t = 0."""
        q = np.zeros((n_in, n_t))
        q[:, 0] = 1.0
        return cls(q)

    @classmethod
    def from_assignment(
        cls,
        assignment: Sequence[int] | NDArray[np.int64],
        n_t: int | None = None,
        t_labels: Sequence[str] | None = None,
    ) -> Encoder:
        """One-hot encoder sending input i to output ``assignment[i]``."""
        a = np.asarray(assignment, dtype=np.int64)
        width = int(a.max()) + 1 if n_t is None else n_t
        if a.size and (a.min() < 0 or a.max() >= width):
            raise InvalidInputError(f"assignment index out of range for {width} outputs")
        q = np.zeros((a.size, width))
        q[np.arange(a.size), a] = 1.0
        return cls(q, tuple(t_labels) if t_labels is not None else ())


@dataclass(frozen=True)
class BottleneckReport:
    """A point on the information plane plus H(T) and H(Y), all in nats."""

    i_xt: float
    i_yt: float
    h_t: float
    h_y: float

    def __post_init__(self) -> None:
        if self.i_yt > self.i_xt + PLANE_TOL:
            raise InvalidInputError(f"DPI violated: I(Y;T)={self.i_yt} > I(X;T)={self.i_xt}")
        if self.i_yt > self.h_y + PLANE_TOL:
            raise InvalidInputError(f"I(Y;T)={self.i_yt} exceeds H(Y)={self.h_y}")
        if self.i_xt > self.h_t + PLANE_TOL:
            raise InvalidInputError(f"I(X;T)={self.i_xt} exceeds H(T)={self.h_t}")

    @classmethod
    def zero(cls, h_y: float) -> BottleneckReport:
        return cls(0.0, 0.0, 0.0, h_y)

    def distance_to(self, i_xt: float, i_yt: float) -> float:
        """Euclidean distance on the information plane."""
        return float(np.hypot(self.i_xt - i_xt, self.i_yt - i_yt))


@dataclass(frozen=True)
class Posterior:
    """Bayes decoder p(y|t); rows of zero-mass t are NaN and ``defined`` is False."""

    matrix: NDArray[np.float64]
    t_marginal: NDArray[np.float64]
    defined: NDArray[np.bool_]


@dataclass(frozen=True)
class LayerChain:
    """Encoders applied in sequence: stage 1 maps X, stage k maps stage k-1."""

    stages: tuple[Encoder, ...] = field(default_factory=tuple)

    def __post_init__(self) -> None:
        stages = tuple(self.stages)
        if not stages:
            raise InvalidInputError("a layer chain needs at least one stage")
        for k in range(1, len(stages)):
            if stages[k - 1].n_t != stages[k].n_in:
                raise InvalidInputError(
                    f"stage {k} outputs {stages[k - 1].n_t} symbols "
                    f"but stage {k + 1} expects {stages[k].n_in}"
                )
        object.__setattr__(self, "stages", stages)

    def composed(self) -> list[Encoder]:
        """q(t_k | x) for every stage k."""
        out: list[Encoder] = []
        acc = self.stages[0].q
        out.append(self.stages[0])
        for stage in self.stages[1:]:
            acc = acc @ stage.q
            out.append(Encoder(acc / acc.sum(axis=1, keepdims=True), stage.t_labels))
        return out


# ---------------------------------------------------------------------------
# Construction and inspection
# ---------------------------------------------------------------------------

def joint_from_function(
    f: Sequence[int],
    p_x: ArrayLike,
    n_y: int | None = None,
    x_labels: Sequence[str] | None = None,
    y_labels: Sequence[str] | None = None,
) -> JointXY:
    """Build p(x, y) = p(x)·[y = f(x)].

    ``n_y`` defaults to max(f) + 1. Zero-mass x outcomes are pruned.
    """
    px = as_prob_vector(p_x, "p(x)")
    fx = np.asarray(f, dtype=np.int64)
    if fx.shape != px.shape:
        raise InvalidInputError(f"f has {fx.size} entries for {px.size} x outcomes")
    width = int(fx.max()) + 1 if n_y is None else n_y
    bad = np.flatnonzero((fx < 0) | (fx >= width))
    if bad.size:
        raise InvalidInputError(f"f({int(bad[0])}) = {int(fx[bad[0]])} is outside 0..{width - 1}")
    p = np.zeros((px.size, width))
    p[np.arange(px.size), fx] = px
    return JointXY.from_matrix(p, x_labels, y_labels)


@dataclass(frozen=True)
class Determinism:
    """Outcome of ``is_deterministic``; truthy when Y = f(X)."""

    deterministic: bool
    f: tuple[int, ...] | None = None
    row: int | None = None

    def __bool__(self) -> bool:
        return self.deterministic


def is_deterministic(joint: JointXY) -> Determinism:
    """Check whether every x row puts all of its mass on a single y."""
    nonzero = joint.p > DETERMINISM_TOL
    counts = nonzero.sum(axis=1)
    bad = np.flatnonzero(counts != 1)
    if bad.size:
        return Determinism(False, None, int(bad[0]))
    return Determinism(True, tuple(int(v) for v in joint.p.argmax(axis=1)))


def require_deterministic(joint: JointXY) -> tuple[int, ...]:
    """Return f or raise ``PreconditionError`` naming the first noisy row."""
    check = is_deterministic(joint)
    if not check or check.f is None:
        raise PreconditionError("joint is not a deterministic function Y = f(X)", check.row)
    return check.f


# ---------------------------------------------------------------------------
# Evaluation
# ---------------------------------------------------------------------------

def _plane(p: NDArray[np.float64], q: NDArray[np.float64]) -> tuple[float, float, float, float]:
    """(I(X;T), I(Y;T), H(T), H(Y)) for raw arrays, no validation."""
    p_x = p.sum(axis=1)
    p_xt = p_x[:, None] * q
    p_yt = p.T @ q
    h_t = _entropy(p_xt.sum(axis=0))
    return _mutual_information(p_xt), _mutual_information(p_yt), h_t, _entropy(p.sum(axis=0))


def _check_compatible(joint: JointXY, enc: Encoder) -> None:
    if enc.n_in != joint.n_x:
        raise InvalidInputError(f"encoder has {enc.n_in} rows, joint has {joint.n_x} x outcomes")


def _capped(quantity: str, value: float, cap: float) -> float:
    """Clip rounding overshoot of at most PLANE_TOL; anything larger is a real violation."""
    if value > cap + PLANE_TOL:
        raise InvariantError(quantity, value, cap)
    return min(value, cap)


def evaluate(joint: JointXY, enc: Encoder) -> BottleneckReport:
    """Exact (I(X;T), I(Y;T), H(T), H(Y)) for T drawn from q(t|x)."""
    _check_compatible(joint, enc)
    i_xt, i_yt, h_t, h_y = _plane(joint.p, enc.q)
    i_xt = _capped("I(X;T)", i_xt, h_t)
    i_yt = _capped("I(Y;T)", i_yt, min(i_xt, h_y))
    return BottleneckReport(i_xt=i_xt, i_yt=i_yt, h_t=h_t, h_y=h_y)


def decoder_posterior(joint: JointXY, enc: Encoder) -> Posterior:
    """Bayes posterior p(y|t) = Σ_x p(x,y) q(t|x) / p(t)."""
    _check_compatible(joint, enc)
    p_yt = joint.p.T @ enc.q
    p_t = p_yt.sum(axis=0)
    defined = p_t > MASS_TOL
    matrix = np.full((enc.n_t, joint.n_y), np.nan)
    matrix[defined] = (p_yt[:, defined] / p_t[defined]).T
    return Posterior(matrix=matrix, t_marginal=p_t, defined=defined)


def objective_value(report: BottleneckReport, objective: Objective | str, beta: float) -> float:
    """Score a plane point: I(Y;T) − β·C or I(Y;T) − β·C², C = I(X;T) or H(T)."""
    if beta < 0:
        raise InvalidInputError(f"beta must be non-negative, got {beta!r}")
    return functional(Objective.parse(objective), beta, report.i_xt, report.i_yt, report.h_t)


def functional(kind: Objective, beta: float, i_xt: float, i_yt: float, h_t: float) -> float:
    """Unchecked objective evaluation on raw plane coordinates."""
    cost = h_t if kind.uses_entropy else i_xt
    if kind.is_squared:
        cost = cost * cost
    return i_yt - beta * cost


# ---------------------------------------------------------------------------
# Layer chains
# ---------------------------------------------------------------------------

def chain_evaluate(joint: JointXY, chain: LayerChain) -> list[BottleneckReport]:
    """One report per stage; both MI sequences are non-increasing along the chain."""
    if chain.stages[0].n_in != joint.n_x:
        raise InvalidInputError(
            f"first stage expects {chain.stages[0].n_in} inputs, joint has {joint.n_x}"
        )
    reports = [evaluate(joint, enc) for enc in chain.composed()]
    for k in range(1, len(reports)):
        prev, cur = reports[k - 1], reports[k]
        where = f"(data processing, stage {k + 1} against stage {k})"
        if cur.i_xt > prev.i_xt + PLANE_TOL:
            raise InvariantError("I(X;T)", cur.i_xt, prev.i_xt, where)
        if cur.i_yt > prev.i_yt + PLANE_TOL:
            raise InvariantError("I(Y;T)", cur.i_yt, prev.i_yt, where)
    return reports


def point_prediction_error(joint: JointXY, chain: LayerChain) -> float:
    """Pr(Y ≠ Ỹ) when Ỹ is the argmax of the final-stage posterior.

    Ties go to the lowest class index; zero-mass final outputs contribute nothing.
    """
    if chain.stages[0].n_in != joint.n_x:
        raise InvalidInputError(
            f"first stage expects {chain.stages[0].n_in} inputs, joint has {joint.n_x}"
        )
    final = compose_chain(chain)
    p_yt = joint.p.T @ final.q
    correct = float(p_yt.max(axis=0).sum())
    return min(1.0, max(0.0, 1.0 - correct))


def compose_chain(chain: LayerChain) -> Encoder:
    """The end-to-end encoder q(t_k | x) of a chain."""
    return chain.composed()[-1]

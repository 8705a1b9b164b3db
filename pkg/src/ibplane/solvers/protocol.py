"""Solver protocol: shared configuration and result types."""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Any

from pydantic import BaseModel, ConfigDict, Field, field_validator

from ibplane.config import get_config
from ibplane.core.distributions import BottleneckReport, Encoder, Objective
from ibplane.errors import InvalidInputError


class PointStatus(str, Enum):
    """Outcome of one β point in a scan."""
    CONVERGED = "converged"
    NOT_CONVERGED = "not-converged"
    FAILED = "failed"


class SolverConfig(BaseModel):
    """Immutable parameters for one solve (all restarts share them)."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    beta: float = Field(default=0.0, ge=0.0)
    t_cardinality: int | None = Field(default=None, ge=1)
    max_iters: int = Field(default=10_000, ge=1)
    tol: float = Field(default=1e-10, gt=0.0)
    restarts: int = Field(default=20, ge=1)
    seed: int = Field(default=20190101, ge=0, lt=2**64)
    damping: float = Field(default=0.5, gt=0.0, le=1.0)

    @field_validator("beta", "tol", "damping")
    @classmethod
    def _finite(cls, v: float) -> float:
        if not math.isfinite(v):
            raise ValueError("must be finite")
        return v

    @classmethod
    def from_settings(cls, **overrides: Any) -> SolverConfig:
        """Defaults from ``IbplaneSettings`` with keyword overrides."""
        cfg = get_config()
        values: dict[str, Any] = {
            "max_iters": cfg.max_iters,
            "tol": cfg.tol,
            "restarts": cfg.restarts,
            "seed": cfg.default_seed,
            "damping": cfg.damping,
        }
        values.update(overrides)
        return cls(**values)

    def with_point(self, beta: float, seed: int | None = None) -> SolverConfig:
        """Copy with a new β (and optionally a new seed), re-validated."""
        data = self.model_dump()
        data["beta"] = beta
        if seed is not None:
            data["seed"] = seed
        return SolverConfig(**data)

    def cardinality_for(self, n_x: int) -> int:
        """|T|, defaulting to |X| + 1."""
        return self.t_cardinality if self.t_cardinality is not None else n_x + 1


@dataclass(frozen=True)
class SolveResult:
    """A local maximiser of one functional, with its convergence record."""
    encoder: Encoder
    report: BottleneckReport
    objective: float
    kind: Objective
    beta: float
    iterations: int
    converged: bool
    restart_index: int


@dataclass(frozen=True)
class ScanPoint:
    """One β of a scan; ``result`` is None when the point failed."""
    beta: float
    status: PointStatus
    result: SolveResult | None = None
    error: str | None = None


@dataclass(frozen=True)
class ScanResult:
    """Scan points in grid order plus the identity of the scanned joint."""
    points: tuple[ScanPoint, ...]
    objective: Objective
    fingerprint: str

    def __post_init__(self) -> None:
        betas = [p.beta for p in self.points]
        if any(b >= c for b, c in zip(betas, betas[1:])):
            raise InvalidInputError("scan betas must be strictly increasing")

    @property
    def betas(self) -> list[float]:
        return [p.beta for p in self.points]

    @property
    def failed(self) -> int:
        return sum(1 for p in self.points if p.status is PointStatus.FAILED)

    @property
    def successful(self) -> list[SolveResult]:
        return [p.result for p in self.points if p.result is not None]

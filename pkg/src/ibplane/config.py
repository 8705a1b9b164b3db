"""
Centralized configuration
=========================

Pydantic Settings based configuration with validation and a debug dump.
Every tunable default used by the solvers, the enumeration guards and the
CLI is declared here; other modules read it through ``get_config()`` instead
of touching ``os.environ``.

Usage:
    from ibplane.config import get_config

    cfg = get_config()
    print(cfg.restarts)
    print(cfg.dump())

Environment:
    Variables are read with the ``IBPLANE_`` prefix, e.g.
    ``IBPLANE_WORKERS=4`` or ``IBPLANE_DEFAULT_SEED=7``. A ``.env`` file in the
    working directory is honoured.
"""

from __future__ import annotations

import json
import logging
import os
from enum import Enum

from pydantic import Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict


# ---------------------------------------------------------------------------
# Log levels
# ---------------------------------------------------------------------------

class LogLevel(str, Enum):
    """Accepted log level names."""

    DEBUG = "DEBUG"
    INFO = "INFO"
    WARNING = "WARNING"
    ERROR = "ERROR"


# ---------------------------------------------------------------------------
# Configuration class
# ---------------------------------------------------------------------------

class IbplaneSettings(BaseSettings):
    """
    Centralized application configuration.

    All environment variables are declared here with types, defaults,
    and validation. Pydantic Settings reads from the process environment
    and from the .env file automatically.
    """

    model_config = SettingsConfigDict(
        env_prefix="IBPLANE_",
        env_file=".env",
        env_file_encoding="utf-8",
        env_ignore_empty=True,
        extra="ignore",
    )

    # ------------------------------------------------------------------
    # Execution
    # ------------------------------------------------------------------
    workers: int = Field(
        default_factory=lambda: os.cpu_count() or 1,
        ge=1,
        le=512,
        description="Worker processes for per-beta solves",
    )
    default_seed: int = Field(
        default=20190101,
        ge=0,
        lt=2**64,
        description="Master seed when --seed is not given",
    )
    log_level: LogLevel = Field(
        default=LogLevel.WARNING,
        description="Root log level for the CLI",
    )

    # ------------------------------------------------------------------
    # Solver defaults
    # ------------------------------------------------------------------
    restarts: int = Field(
        default=20,
        ge=1,
        le=10_000,
        description="Random restarts per solve",
    )
    max_iters: int = Field(
        default=10_000,
        ge=1,
        le=10_000_000,
        description="Iteration cap per restart",
    )
    tol: float = Field(
        default=1e-10,
        gt=0.0,
        description="Stop when the objective changes by less than this (nats)",
    )
    damping: float = Field(
        default=0.5,
        gt=0.0,
        le=1.0,
        description="Damping of the effective beta in squared objectives",
    )

    # ------------------------------------------------------------------
    # Enumeration guards
    # ------------------------------------------------------------------
    partition_guard: int = Field(
        default=12,
        ge=1,
        le=15,
        description="Largest class count for exhaustive set-partition enumeration",
    )
    brute_force_max_encoders: int = Field(
        default=20_000_000,
        ge=1,
        description="Largest encoder count the simplex-grid oracle will enumerate",
    )

    # ------------------------------------------------------------------
    # Output
    # ------------------------------------------------------------------
    output_digits: int = Field(
        default=12,
        ge=6,
        le=17,
        description="Significant digits for serialized numbers",
    )

    @field_validator("log_level", mode="before")
    @classmethod
    def _normalize_level(cls, v: object) -> object:
        """Accept lower-case level names."""
        if isinstance(v, str):
            return v.upper()
        return v

    @property
    def log_level_number(self) -> int:
        """Numeric logging level."""
        return int(logging.getLevelName(self.log_level.value))

    # =====================================================================
    # Config dump for debugging
    # =====================================================================

    def dump(self) -> str:
        """Dump configuration as a human-readable string."""
        lines = [
            "=" * 60,
            "  ibplane configuration",
            "=" * 60,
        ]
        for key, value in self.model_dump(mode="json").items():
            lines.append(f"  {key}: {value}")
        lines.append("=" * 60)
        return "\n".join(lines)

    def dump_json(self) -> str:
        """Dump configuration as JSON for programmatic consumption."""
        return json.dumps(self.model_dump(mode="json"), indent=2, sort_keys=True)


# ---------------------------------------------------------------------------
# Singleton access
# ---------------------------------------------------------------------------

_config_instance: IbplaneSettings | None = None


def get_config() -> IbplaneSettings:
    """
    Get the global configuration singleton.

    The configuration is loaded once from environment variables and .env file.
    Subsequent calls return the cached instance.
    """
    global _config_instance
    if _config_instance is None:
        _config_instance = IbplaneSettings()
    return _config_instance


def reset_config() -> None:
    """Reset the singleton so the next get_config() re-reads the environment."""
    global _config_instance
    _config_instance = None

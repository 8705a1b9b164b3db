"""
Run manifests
=============

Every CLI output is accompanied by ``<output>.manifest.json`` recording the
command, its parameters, the effective solver settings, the seed and the
package version, which together reproduce the output exactly.

The file is written atomically (temp file + ``os.replace``) so a crashed run
never leaves a half-written manifest behind.
"""

from __future__ import annotations

import logging
import os
import tempfile
from pathlib import Path
from typing import Any, Final

from pydantic import BaseModel, ConfigDict, Field

logger = logging.getLogger("ibplane.manifest")

MANIFEST_SUFFIX: Final[str] = ".manifest.json"


class RunManifest(BaseModel):
    """What was run to produce a set of outputs."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    command: str
    input_path: str | None = None
    joint_fingerprint: str | None = None
    parameters: dict[str, Any] = Field(default_factory=dict)
    # effective solver settings after environment defaults and flags
    solver: dict[str, Any] | None = None
    workers: int | None = None
    seed: int
    version: str
    outputs: list[str] = Field(default_factory=list)


def manifest_path(output: Path | str) -> Path:
    """``plane.csv`` → ``plane.csv.manifest.json``."""
    p = Path(output)
    return p.with_name(p.name + MANIFEST_SUFFIX)


def write_manifest(manifest: RunManifest, output: Path | str) -> Path:
    """Atomically write *manifest* next to *output*; returns the manifest path."""
    target = manifest_path(output)
    target.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp_path = tempfile.mkstemp(suffix=".tmp", prefix="manifest_", dir=str(target.parent))
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as f:
            f.write(manifest.model_dump_json(indent=2))
            f.write("\n")
        os.replace(tmp_path, target)
    except BaseException:
        try:
            os.unlink(tmp_path)
        except OSError:
            pass
        raise
    logger.debug("Wrote manifest %s", target)
    return target


def read_manifest(path: Path | str) -> RunManifest:
    return RunManifest.model_validate_json(Path(path).read_text(encoding="utf-8"))

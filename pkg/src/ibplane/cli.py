"""
CLI interface for ibplane.

Uses Click for command-line parsing with subcommands. Every command that
writes data also writes ``<output>.manifest.json`` describing the run.

Usage:
    ibplane curve joint.csv --objective squared-ib --beta-log 0.1:5:15 -o plane.csv
    ibplane analytic joint.csv --talpha-grid 11 -o talpha.csv
    ibplane verify joint.csv --theorems a1,a2 --eps 0.01,0.1 --trials 200 -o bounds.csv
    ibplane demo --classes 10 --inputs-per-class 10 --outdir demo/
    ibplane config --json

Exit codes:
    0  success
    1  invalid input (unparsable file, bad flag values, failed precondition)
    2  partial failure (failed scan points, violated bounds)
"""

from __future__ import annotations

import csv
import io
import logging
import sys
from collections.abc import Callable, Sequence
from pathlib import Path
from typing import Any, TypeVar

import click
from dotenv import load_dotenv
from pydantic import ValidationError

from ibplane import __version__

# ---------------------------------------------------------------------------
# Load .env early so all config reads pick up the values
# ---------------------------------------------------------------------------
load_dotenv()

from ibplane.bounds import BoundReport, parse_theorems, summarize, sweep, write_bound_csv  # noqa: E402
from ibplane.bounds.formulas import check_epsilon  # noqa: E402
from ibplane.config import LogLevel, get_config  # noqa: E402
from ibplane.constructs import alpha_sweep, dib_envelope  # noqa: E402
from ibplane.core import JointXY, Objective, require_deterministic  # noqa: E402
from ibplane.core.formats import format_number, read_joint  # noqa: E402
from ibplane.demo import run_demo  # noqa: E402
from ibplane.errors import IbplaneError, InvalidInputError  # noqa: E402
from ibplane.manifest import RunManifest, write_manifest  # noqa: E402
from ibplane.solvers import (  # noqa: E402
    SolverConfig,
    hard_cluster_front,
    parse_grid_spec,
    scan,
    write_scan_csv,
    write_scan_json,
)

logger = logging.getLogger("ibplane.cli")

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_PARTIAL = 2

LOG_FORMAT = "%(asctime)s | %(levelname)-8s | %(message)s"

T = TypeVar("T")


# ---------------------------------------------------------------------------
# Shared helpers
# ---------------------------------------------------------------------------

class _IbplaneGroup(click.Group):
    """Group that reports malformed flags as invalid input (exit 1)."""

    def parse_args(self, ctx: click.Context, args: list[str]) -> list[str]:
        try:
            return super().parse_args(ctx, args)
        except click.UsageError as exc:
            exc.exit_code = EXIT_INVALID
            raise

    def invoke(self, ctx: click.Context) -> Any:
        try:
            return super().invoke(ctx)
        except click.UsageError as exc:
            exc.exit_code = EXIT_INVALID
            raise


def _guarded(fn: Callable[[], T]) -> T:
    """Run *fn*, turning domain and validation errors into exit code 1."""
    try:
        return fn()
    except (IbplaneError, ValidationError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_INVALID)


def _float_list(text: str, name: str) -> list[float]:
    try:
        values = [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise InvalidInputError(f"{name} must be a comma-separated list of numbers, got {text!r}") from None
    if not values:
        raise InvalidInputError(f"{name} is empty")
    return values


def _load(path: Path) -> JointXY:
    joint = read_joint(path)
    logger.info("Loaded %s: |X|=%d |Y|=%d", path, joint.n_x, joint.n_y)
    return joint


def _jsonable(params: dict[str, Any]) -> dict[str, Any]:
    return {k: str(v) if isinstance(v, Path) else v for k, v in params.items()}


def _manifest(
    ctx: click.Context,
    outputs: Sequence[Path],
    input_path: Path | None = None,
    joint: JointXY | None = None,
    cfg: SolverConfig | None = None,
) -> None:
    assert ctx.command.name is not None
    manifest = RunManifest(
        command=ctx.command.name,
        input_path=str(input_path) if input_path is not None else None,
        joint_fingerprint=joint.fingerprint() if joint is not None else None,
        parameters=_jsonable(ctx.params),
        solver=cfg.model_dump() if cfg is not None else None,
        workers=ctx.obj["workers"] if cfg is not None else None,
        seed=ctx.obj["seed"],
        version=__version__,
        outputs=[str(p) for p in outputs],
    )
    for out in outputs:
        write_manifest(manifest, out)


def _solver_config(ctx: click.Context, **overrides: Any) -> SolverConfig:
    values = {k: v for k, v in overrides.items() if v is not None}
    return SolverConfig.from_settings(seed=ctx.obj["seed"], **values)


# ---------------------------------------------------------------------------
# Click group
# ---------------------------------------------------------------------------

@click.group(
    cls=_IbplaneGroup,
    context_settings={"help_option_names": ["-h", "--help"]},
)
@click.version_option(__version__, "-V", "--version", prog_name="ibplane")
@click.option(
    "--log-level",
    type=click.Choice([lv.value for lv in LogLevel], case_sensitive=False),
    default=None,
    help="Log level (default: IBPLANE_LOG_LEVEL or WARNING).",
)
@click.option("--workers", type=click.IntRange(min=1), default=None, help="Worker processes for β scans.")
@click.option("--seed", type=click.IntRange(min=0), default=None, help="Master seed (default: IBPLANE_DEFAULT_SEED).")
@click.pass_context
def cli(ctx: click.Context, log_level: str | None, workers: int | None, seed: int | None) -> None:
    """ibplane: information planes and perturbation bounds for the information bottleneck."""
    cfg = get_config()
    level = logging.getLevelName(log_level.upper()) if log_level else cfg.log_level_number
    logging.basicConfig(level=level, format=LOG_FORMAT, stream=sys.stderr, force=True)
    ctx.ensure_object(dict)
    ctx.obj["workers"] = workers if workers is not None else cfg.workers
    ctx.obj["seed"] = seed if seed is not None else cfg.default_seed


# ---------------------------------------------------------------------------
# curve
# ---------------------------------------------------------------------------

@cli.command()
@click.argument("input_path", metavar="INPUT", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option(
    "--objective",
    type=click.Choice([o.value for o in Objective]),
    default=Objective.SQUARED_IB.value,
    show_default=True,
    help="Functional to optimise at each β.",
)
@click.option("--beta-lin", "beta_lin", metavar="LO:HI:N", default=None, help="Linearly spaced β grid.")
@click.option("--beta-log", "beta_log", metavar="LO:HI:N", default=None, help="Log-spaced β grid.")
@click.option("--restarts", type=int, default=None, help="Random restarts per β.")
@click.option("--max-iters", type=int, default=None, help="Iteration cap per restart.")
@click.option("--tol", type=float, default=None, help="Convergence tolerance on the objective.")
@click.option("--t-card", "t_cardinality", type=int, default=None, help="|T| (default |X| + 1).")
@click.option("--damping", type=float, default=None, help="Squared-objective β_eff damping in (0, 1].")
@click.option("-o", "--output", type=click.Path(dir_okay=False, path_type=Path), required=True, help="CSV output.")
@click.option("--json", "json_path", type=click.Path(dir_okay=False, path_type=Path), default=None, help="JSON output.")
@click.option("--encoders", is_flag=True, default=False, help="Embed encoder matrices in the JSON output.")
@click.pass_context
def curve(
    ctx: click.Context,
    input_path: Path,
    objective: str,
    beta_lin: str | None,
    beta_log: str | None,
    restarts: int | None,
    max_iters: int | None,
    tol: float | None,
    t_cardinality: int | None,
    damping: float | None,
    output: Path,
    json_path: Path | None,
    encoders: bool,
) -> None:
    """Scan β and write the information-plane points of the optimisers."""
    kind = Objective(objective)
    if beta_lin is not None and beta_log is not None:
        raise click.UsageError("--beta-lin and --beta-log are mutually exclusive")

    def grid() -> list[float]:
        if beta_lin is not None:
            return parse_grid_spec(beta_lin)
        if beta_log is not None:
            return parse_grid_spec(beta_log, log=True)
        return parse_grid_spec("0.1:5:15", log=True) if kind.is_squared else parse_grid_spec("0.1:0.9:9")

    betas = _guarded(grid)
    joint = _guarded(lambda: _load(input_path))
    cfg = _guarded(lambda: _solver_config(
        ctx, restarts=restarts, max_iters=max_iters, tol=tol, t_cardinality=t_cardinality, damping=damping,
    ))
    result = _guarded(lambda: scan(joint, kind, betas, cfg, ctx.obj["workers"]))

    outputs = [write_scan_csv(result, output)]
    if json_path is not None:
        outputs.append(write_scan_json(result, json_path, encoders, joint.x_labels))
    _manifest(ctx, outputs, input_path, joint, cfg)

    click.echo(f"{len(result.points)} points written to {output} ({result.failed} failed)")
    if result.failed:
        sys.exit(EXIT_PARTIAL)


# ---------------------------------------------------------------------------
# analytic
# ---------------------------------------------------------------------------

def _analytic_csv(joint: JointXY, talpha_grid: int | None, envelope: bool) -> str:
    digits = get_config().output_digits
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    if talpha_grid is not None:
        writer.writerow(["alpha", "i_xt", "i_yt", "h_t"])
        for alpha, rep in alpha_sweep(joint, talpha_grid):
            writer.writerow([format_number(v, digits) for v in (alpha, rep.i_xt, rep.i_yt, rep.h_t)])
    elif envelope:
        writer.writerow(["h_t", "i_yt"])
        for h_t, i_yt in dib_envelope(joint):
            writer.writerow([format_number(h_t, digits), format_number(i_yt, digits)])
    else:
        writer.writerow(["h_t", "i_xt", "i_yt"])
        for point in hard_cluster_front(joint):
            writer.writerow([format_number(v, digits) for v in point])
    return buf.getvalue()


@cli.command()
@click.argument("input_path", metavar="INPUT", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--talpha-grid", type=int, default=None, metavar="N", help="T_α sweep with N values of α in [0, 1].")
@click.option("--dib-envelope", "envelope", is_flag=True, default=False, help="Hard-clustering (H(T), I(Y;T)) envelope.")
@click.option("--hard-front", is_flag=True, default=False, help="Hard-clustering front in the IB plane.")
@click.option("-o", "--output", type=click.Path(dir_okay=False, path_type=Path), required=True, help="CSV output.")
@click.pass_context
def analytic(
    ctx: click.Context,
    input_path: Path,
    talpha_grid: int | None,
    envelope: bool,
    hard_front: bool,
    output: Path,
) -> None:
    """Closed-form curves of a deterministic joint."""
    if sum((talpha_grid is not None, envelope, hard_front)) != 1:
        raise click.UsageError("choose exactly one of --talpha-grid, --dib-envelope, --hard-front")

    def build() -> tuple[JointXY, str]:
        joint = _load(input_path)
        require_deterministic(joint)
        return joint, _analytic_csv(joint, talpha_grid, envelope)

    joint, text = _guarded(build)
    output.write_text(text, encoding="utf-8")
    _manifest(ctx, [output], input_path, joint)
    click.echo(f"{text.count(chr(10)) - 1} points written to {output}")


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------

@cli.command()
@click.argument("input_path", metavar="INPUT", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--theorems", default="all", show_default=True, help="Comma-separated checks, or 'all'.")
@click.option("--eps", default="0.01,0.1", show_default=True, help="Comma-separated ε values in [0, 1/2].")
@click.option("--trials", type=int, default=10, show_default=True, help="Perturbations per ε.")
@click.option("--beta", "betas", default="0.25,0.5,0.75", show_default=True, help="β values for the IB-maximiser check.")
@click.option("--r", "rates", default=None, help="Rates for the curve checks (default: a grid up to 1.2·H(Y)).")
@click.option("--grid", "grid_per_row", type=int, default=21, show_default=True, help="Simplex grid per encoder row.")
@click.option("-o", "--output", type=click.Path(dir_okay=False, path_type=Path), required=True, help="CSV output.")
@click.pass_context
def verify(
    ctx: click.Context,
    input_path: Path,
    theorems: str,
    eps: str,
    trials: int,
    betas: str,
    rates: str | None,
    grid_per_row: int,
    output: Path,
) -> None:
    """Randomised checks of the perturbation bounds around a deterministic joint."""

    def run() -> tuple[JointXY, SolverConfig, list[BoundReport]]:
        selected = parse_theorems(theorems)
        epsilons = _float_list(eps, "--eps")
        beta_values = _float_list(betas, "--beta")
        r_values = _float_list(rates, "--r") if rates is not None else None
        joint = _load(input_path)
        require_deterministic(joint)
        for e in epsilons:
            check_epsilon(e, joint.n_y)
        cfg = _solver_config(ctx)
        return joint, cfg, sweep(
            selected, epsilons, [joint.n_y], trials, ctx.obj["seed"],
            base=joint, betas=beta_values, r_values=r_values,
            cfg=cfg, grid_per_row=grid_per_row,
        )

    joint, cfg, reports = _guarded(run)
    write_bound_csv(reports, output)
    _manifest(ctx, [output], input_path, joint, cfg)

    counts = summarize(reports)
    click.echo(
        f"{len(reports)} reports written to {output}: "
        + ", ".join(f"{k} {v}" for k, v in counts.items())
    )
    if counts["violated"]:
        sys.exit(EXIT_PARTIAL)


# ---------------------------------------------------------------------------
# demo
# ---------------------------------------------------------------------------

@cli.command()
@click.option("--classes", type=int, default=10, show_default=True, help="Number of uniform classes.")
@click.option("--inputs-per-class", type=int, default=10, show_default=True, help="Inputs mapped to each class.")
@click.option(
    "--outdir",
    type=click.Path(file_okay=False, path_type=Path),
    default=Path("."),
    show_default=True,
    help="Directory for demo_plane.csv and demo_summary.txt.",
)
@click.pass_context
def demo(ctx: click.Context, classes: int, inputs_per_class: int, outdir: Path) -> None:
    """End-to-end run on a synthetic deterministic joint."""
    cfg = _guarded(lambda: _solver_config(ctx))
    summary = _guarded(lambda: run_demo(outdir, classes, inputs_per_class, cfg, ctx.obj["workers"]))
    _manifest(ctx, summary.outputs, cfg=cfg)
    click.echo(summary.to_text(), nl=False)
    if summary.failed_points:
        sys.exit(EXIT_PARTIAL)


# ---------------------------------------------------------------------------
# config
# ---------------------------------------------------------------------------

@cli.command("config")
@click.option("--json", "as_json", is_flag=True, default=False, help="Output as JSON.")
def config_cmd(as_json: bool) -> None:
    """Dump current configuration."""
    cfg = get_config()
    click.echo(cfg.dump_json() if as_json else cfg.dump())


# ---------------------------------------------------------------------------
# Entry point
# ---------------------------------------------------------------------------

def main() -> None:
    """Package entry point (called by ``ibplane`` console script and ``__main__``)."""
    cli()

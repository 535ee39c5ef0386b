"""``norms``: per-element L, Xi and the Sobolev/Schwartz weights of a seeded function."""

from __future__ import annotations

import logging
from pathlib import Path

import lib_log_rich.runtime
import rich_click as click

from hcsbench.application.workbench import norms_table, xi_evaluator_for

from ..constants import CLICK_CONTEXT_SETTINGS
from ..context import get_cli_context
from ._shared import D, GENERATORS, GRID, GROUP, METHOD, OUT, RADIUS, SEED, reported_errors, run_flags

logger = logging.getLogger(__name__)


@click.command("norms", context_settings=CLICK_CONTEXT_SETTINGS)
@GROUP
@GENERATORS
@RADIUS
@D
@SEED
@METHOD
@GRID
@OUT
@click.pass_context
def cli_norms(
    ctx: click.Context,
    group: str | None,
    generators: tuple[str, ...],
    radius: int | None,
    d: float | None,
    seed: int | None,
    method: str | None,
    grid_resolution: int | None,
    output_dir: Path | None,
) -> None:
    r"""Write norms.csv and norms.json; print the Sobolev and Schwartz norms.

    \b
    Example:
        hcsbench norms --group sl2z --radius 3 --d 2
    """
    cli_ctx = get_cli_context(ctx)
    with lib_log_rich.runtime.bind(job_id="cli-norms", extra={"command": "norms"}), reported_errors("norms"):
        run = cli_ctx.run_config(
            **run_flags(
                group=group,
                generators=generators,
                radius=radius,
                d=d,
                seed=seed,
                method=method,
                grid_resolution=grid_resolution,
                output_dir=output_dir,
            )
        )
        xi = xi_evaluator_for(
            run.ambient_n, run.method, grid_resolution=run.grid_resolution, euler_resolution=run.euler_resolution
        )
        table = norms_table(run.presentation(), run.radius, run.d, run.seed, xi, cap=run.ball_cap)
        services = cli_ctx.services
        table_path = services.write_table(table.rows, run.output_dir / "norms.csv")
        summary = {**table.summary(), "group": run.group, "radius": run.radius, "seed": run.seed}
        services.write_json(summary, run.output_dir / "norms.json")
        logger.info("Norms tabulated", extra=summary)
        click.echo(f"{run.group}: radius {run.radius}, {len(table.rows)} elements, d = {run.d:g}, seed {run.seed}")
        click.echo(f"  Sobolev  ||f||_H  = {table.sobolev:.10g}")
        click.echo(f"  Schwartz ||f||_S  = {table.schwartz:.10g}")
        click.echo(f"  comparison slack  = {table.gap:.6g}")
        click.echo(f"  written: {table_path}")


__all__ = ["cli_norms"]

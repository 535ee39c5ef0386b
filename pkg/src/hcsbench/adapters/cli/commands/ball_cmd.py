"""``ball``: enumerate a word-length ball and serialize it."""

from __future__ import annotations

import logging
from pathlib import Path

import lib_log_rich.runtime
import rich_click as click

from hcsbench.application.workbench import ball_summary, xi_evaluator_for
from hcsbench.domain.discrete_group import ball_table_rows, ball_to_dict, generate_ball

from ..constants import CLICK_CONTEXT_SETTINGS
from ..context import get_cli_context
from ._shared import GENERATORS, GRID, GROUP, METHOD, OUT, RADIUS, reported_errors, run_flags

logger = logging.getLogger(__name__)

#: Warn once a ball uses this share of the element cap.
CAP_WARNING_SHARE = 0.8


@click.command("ball", context_settings=CLICK_CONTEXT_SETTINGS)
@GROUP
@GENERATORS
@RADIUS
@METHOD
@GRID
@OUT
@click.pass_context
def cli_ball(
    ctx: click.Context,
    group: str | None,
    generators: tuple[str, ...],
    radius: int | None,
    method: str | None,
    grid_resolution: int | None,
    output_dir: Path | None,
) -> None:
    r"""Write ball.json (elements with words) and ball.csv (L and Xi per element).

    \b
    Example:
        hcsbench ball --group sanov --radius 4 --out out/
    """
    cli_ctx = get_cli_context(ctx)
    with lib_log_rich.runtime.bind(job_id="cli-ball", extra={"command": "ball"}), reported_errors("ball"):
        run = cli_ctx.run_config(
            **run_flags(
                group=group,
                generators=generators,
                radius=radius,
                method=method,
                grid_resolution=grid_resolution,
                output_dir=output_dir,
            )
        )
        ball = generate_ball(run.presentation(), run.radius, cap=run.ball_cap)
        summary = ball_summary(ball)
        if len(ball) >= CAP_WARNING_SHARE * run.ball_cap:
            logger.warning("Ball close to the element cap", extra={"size": len(ball), "cap": run.ball_cap})
        xi = xi_evaluator_for(
            run.ambient_n, run.method, grid_resolution=run.grid_resolution, euler_resolution=run.euler_resolution
        )
        rows = [
            {key: value for key, value in row.items() if not key.startswith("value_")}
            for row in ball_table_rows(ball, xi)
        ]
        services = cli_ctx.services
        json_path = services.write_json(ball_to_dict(ball), run.output_dir / "ball.json")
        table_path = services.write_table(rows, run.output_dir / "ball.csv")
        logger.info("Ball written", extra={**summary, "json": str(json_path), "table": str(table_path)})
        click.echo(f"{ball.presentation.name}: radius {ball.radius}, {len(ball)} elements")
        click.echo(f"  layers:  {' '.join(str(count) for count in summary['layers'])}")
        click.echo(f"  max L:   {summary['max_length']:.6f}")
        click.echo(f"  written: {json_path}, {table_path}")


__all__ = ["cli_ball"]

"""``cd``: the chamber constant C_d with its tail bound."""

from __future__ import annotations

import logging

import lib_log_rich.runtime
import rich_click as click

from hcsbench.application.workbench import cd_summary, cd_to_dict
from hcsbench.domain.enums import OutputFormat

from ..constants import CLICK_CONTEXT_SETTINGS, DEFAULT_CD_CUTOFFS
from ..context import get_cli_context
from ..typed_click import option
from ._shared import D, DETERMINISTIC, FORMAT, GRID, GROUP, METHOD, N, WORKERS, echo_payload, reported_errors, run_flags

logger = logging.getLogger(__name__)


@click.command("cd", context_settings=CLICK_CONTEXT_SETTINGS)
@GROUP
@N
@D
@option(
    "--cutoff",
    "cutoffs",
    type=click.FloatRange(min=0.0, min_open=True),
    multiple=True,
    help="Chamber cutoff (repeatable; default 10, 20 and 40)",
)
@METHOD
@GRID
@WORKERS
@DETERMINISTIC
@FORMAT
@click.pass_context
def cli_cd(
    ctx: click.Context,
    group: str | None,
    n: int | None,
    d: float | None,
    cutoffs: tuple[float, ...],
    method: str | None,
    grid_resolution: int | None,
    workers: int | None,
    deterministic: bool | None,
    output_format: str,
) -> None:
    r"""Print the truncated C_d and its tail bound at each cutoff.

    \b
    Example:
        hcsbench cd --d 2 --cutoff 10 --cutoff 20 --cutoff 40
    """
    cli_ctx = get_cli_context(ctx)
    fmt = OutputFormat(output_format.lower())
    with lib_log_rich.runtime.bind(job_id="cli-cd", extra={"command": "cd"}), reported_errors("cd"):
        if group is None and n is not None:
            group = f"sl{n}"
        run = cli_ctx.run_config(
            **run_flags(
                group=group,
                n=n,
                d=d,
                method=method,
                grid_resolution=grid_resolution,
                workers=workers,
                deterministic=deterministic,
            )
        )
        run.require_admissible_d()
        results = cd_summary(
            run.ambient_n,
            run.d,
            cutoffs or DEFAULT_CD_CUTOFFS,
            method=run.method,
            grid_resolution=run.grid_resolution,
            euler_resolution=run.euler_resolution,
            ctx=run.parallel_context(),
        )
        rows = [cd_to_dict(cd) for cd in results]
        logger.info("C_d computed", extra={"n": run.ambient_n, "d": run.d, "rows": rows})
        if fmt is OutputFormat.JSON:
            echo_payload({"n": run.ambient_n, "d": run.d, "results": rows}, fmt)
            return
        click.echo(f"C_d on SL({run.ambient_n},R), d = {run.d:g}")
        click.echo(f"  {'cutoff':>8} {'value':>18} {'tail_bound':>12} {'decay_const':>12}")
        for cd in results:
            click.echo(f"  {cd.cutoff:>8g} {cd.value:>18.12f} {cd.tail_bound:>12.3e} {cd.decay_constant:>12.6f}")


__all__ = ["cli_cd"]

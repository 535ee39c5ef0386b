"""``xi``: evaluate the Harish-Chandra function by every backend."""

from __future__ import annotations

import logging

import lib_log_rich.runtime
import rich_click as click

from hcsbench.application.workbench import xi_comparison
from hcsbench.domain.enums import OutputFormat

from ..constants import CLICK_CONTEXT_SETTINGS
from ..context import get_cli_context
from ..typed_click import option
from ._shared import FORMAT, GRID, GROUP, N, echo_payload, reported_errors, run_flags

logger = logging.getLogger(__name__)


@click.command("xi", context_settings=CLICK_CONTEXT_SETTINGS)
@GROUP
@N
@option("--t", "t", type=float, default=None, help="Evaluate at exp(H) with H along rho and top root value t")
@option("--matrix", type=str, default=None, help='Evaluate at a matrix literal "a,b;c,d"')
@GRID
@FORMAT
@click.pass_context
def cli_xi(
    ctx: click.Context,
    group: str | None,
    n: int | None,
    t: float | None,
    matrix: str | None,
    grid_resolution: int | None,
    output_format: str,
) -> None:
    r"""Print Xi(g) from the boundary and Iwasawa backends and their difference.

    On SL(2,R) the grid-free horocyclic value is printed as well.

    \b
    Example:
        hcsbench xi --group sl2 --t 0
    """
    cli_ctx = get_cli_context(ctx)
    fmt = OutputFormat(output_format.lower())
    with lib_log_rich.runtime.bind(job_id="cli-xi", extra={"command": "xi"}), reported_errors("xi"):
        if group is None and n is not None:
            group = f"sl{n}"
        run = cli_ctx.run_config(**run_flags(group=group, n=n, grid_resolution=grid_resolution))
        result = xi_comparison(
            run.ambient_n,
            t=t,
            matrix=matrix,
            grid_resolution=run.grid_resolution,
            euler_resolution=run.euler_resolution,
        )
        logger.info("Xi evaluated", extra={"n": result.n, "delta": result.delta})
        if fmt is OutputFormat.JSON:
            echo_payload(result.to_dict(), fmt)
            return
        click.echo(f"Xi(g) on SL({result.n},R), g = {result.matrix}")
        for name, value in result.values.items():
            click.echo(f"  {name:<11} {value:.10f}")
        click.echo(f"  {'delta':<11} {result.delta:.3e}")


__all__ = ["cli_xi"]

"""``plot``: static SVG figures of the Xi decay and of report ratio sequences."""

from __future__ import annotations

import logging
from pathlib import Path

import lib_log_rich.runtime
import numpy as np
import rich_click as click

from hcsbench.application.workbench import decay_profile, xi_evaluator_for

from ..constants import CLICK_CONTEXT_SETTINGS
from ..context import get_cli_context
from ..typed_click import option
from ._shared import GROUP, METHOD, N, OUT, reported_errors, run_flags

logger = logging.getLogger(__name__)


@click.command("plot", context_settings=CLICK_CONTEXT_SETTINGS)
@GROUP
@N
@option(
    "--cutoff",
    "chamber_cutoff",
    type=click.FloatRange(min=0.0, min_open=True),
    default=None,
    help="Largest t of the decay plot (run.chamber_cutoff)",
)
@option("--samples", type=click.IntRange(min=2), default=401, show_default=True, help="Points on the t axis")
@option(
    "--report",
    "report_path",
    type=click.Path(path_type=Path),
    default=None,
    help="report.json (or its directory) whose ratio sequences are plotted",
)
@METHOD
@OUT
@click.pass_context
def cli_plot(
    ctx: click.Context,
    group: str | None,
    n: int | None,
    chamber_cutoff: float | None,
    samples: int,
    report_path: Path | None,
    method: str | None,
    output_dir: Path | None,
) -> None:
    r"""Write xi_decay.svg (SL(2,R)) and, with --report, ratios.svg.

    The decay figure draws Xi(a_t) against the envelope e^{-t/2}(1 + t/sqrt 2);
    the largest ratio of the two over the plotted range is printed.

    \b
    Example:
        hcsbench plot --cutoff 20 --report out/report.json --out out/
    """
    cli_ctx = get_cli_context(ctx)
    with lib_log_rich.runtime.bind(job_id="cli-plot", extra={"command": "plot"}), reported_errors("plot"):
        if group is None and n is not None:
            group = f"sl{n}"
        run = cli_ctx.run_config(
            **run_flags(group=group, n=n, chamber_cutoff=chamber_cutoff, method=method, output_dir=output_dir)
        )
        services = cli_ctx.services
        if run.ambient_n == 2:  # noqa: PLR2004
            xi = xi_evaluator_for(2, run.method, grid_resolution=run.grid_resolution)
            t, values, envelope = decay_profile(run.chamber_cutoff, xi, samples)
            sup_ratio = float(np.max(values / envelope))
            path = services.render_decay_plot(t, values, envelope, run.output_dir / "xi_decay.svg")
            logger.info("Decay plot written", extra={"path": str(path), "sup_ratio": sup_ratio})
            click.echo(f"decay: sup Xi/envelope on [0, {run.chamber_cutoff:g}] = {sup_ratio:.6f}; written {path}")
        else:
            click.echo(f"decay: skipped, the envelope plot is drawn for SL(2,R) only (n = {run.ambient_n})")

        if report_path is not None:
            _, reports = services.load_report_bundle(report_path)
            sequences = {report.statement.value: report.sequences for report in reports if report.sequences}
            path = services.render_ratio_plot(sequences, run.output_dir / "ratios.svg")
            logger.info("Ratio plot written", extra={"path": str(path), "statements": sorted(sequences)})
            click.echo(f"ratios: {len(sequences)} statement(s) with sequences; written {path}")


__all__ = ["cli_plot"]

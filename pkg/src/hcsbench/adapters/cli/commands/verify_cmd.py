"""``verify``: run the statement suite and write the report bundle."""

from __future__ import annotations

import logging
from pathlib import Path
from typing import Any

import lib_log_rich.runtime
import rich_click as click

from hcsbench.adapters.config.run_config import to_suite_settings
from hcsbench.application.verify_suite import run_suite
from hcsbench.domain.reports import VerificationReport

from ..constants import CLICK_CONTEXT_SETTINGS
from ..context import get_cli_context
from ..exit_codes import ExitCode
from ..typed_click import option
from ._shared import (
    D,
    DETERMINISTIC,
    GENERATORS,
    GRID,
    GROUP,
    METHOD,
    OUT,
    RADIUS,
    SEED,
    WORKERS,
    reported_errors,
    run_flags,
)

logger = logging.getLogger(__name__)


def residual_rows(reports: list[VerificationReport]) -> list[dict[str, Any]]:
    """One row per (statement, residual) with its tolerance and verdict."""
    return [
        {
            "statement": report.statement.value,
            "residual": name,
            "value": float(value),
            "tolerance": float(report.tolerances[name]),
            "passed": value <= report.tolerances[name],
        }
        for report in reports
        for name, value in report.residuals.items()
    ]


@click.command("verify", context_settings=CLICK_CONTEXT_SETTINGS)
@option("--suite", type=str, default=None, help='"all" or a comma list of statement ids (run.suite)')
@GROUP
@GENERATORS
@D
@SEED
@DETERMINISTIC
@option("--R", "truncation_radius", type=click.IntRange(min=1), default=None, help="Truncation radius (run.truncation_radius)")
@RADIUS
@GRID
@option(
    "--cutoff",
    "chamber_cutoff",
    type=click.FloatRange(min=0.0, min_open=True),
    default=None,
    help="Chamber cutoff (run.chamber_cutoff)",
)
@METHOD
@WORKERS
@OUT
@click.pass_context
def cli_verify(
    ctx: click.Context,
    suite: str | None,
    group: str | None,
    generators: tuple[str, ...],
    d: float | None,
    seed: int | None,
    deterministic: bool | None,
    truncation_radius: int | None,
    radius: int | None,
    grid_resolution: int | None,
    chamber_cutoff: float | None,
    method: str | None,
    workers: int | None,
    output_dir: Path | None,
) -> None:
    r"""Check the selected statements; exit 1 when any report fails.

    Writes report.json (configuration, its hash and every report),
    residuals.csv and ratios.svg into the output directory.

    \b
    Example:
        hcsbench verify --suite all --group sanov --d 2 --seed 42 --deterministic
    """
    cli_ctx = get_cli_context(ctx)
    with lib_log_rich.runtime.bind(job_id="cli-verify", extra={"command": "verify"}), reported_errors("verify"):
        run = cli_ctx.run_config(
            **run_flags(
                suite=suite,
                group=group,
                generators=generators,
                d=d,
                seed=seed,
                deterministic=deterministic,
                truncation_radius=truncation_radius,
                radius=radius,
                grid_resolution=grid_resolution,
                chamber_cutoff=chamber_cutoff,
                method=method,
                workers=workers,
                output_dir=output_dir,
            )
        )
        settings = to_suite_settings(run, cli_ctx.tolerances())
        logger.info("Verification started", extra={"settings": settings.describe()})
        reports = run_suite(settings, run.parallel_context())

        services = cli_ctx.services
        bundle_path = services.write_report_bundle(reports, run_config=run.describe(), out_dir=run.output_dir)
        services.write_table(residual_rows(reports), run.output_dir / "residuals.csv")
        sequences = {report.statement.value: report.sequences for report in reports if report.sequences}
        services.render_ratio_plot(sequences, run.output_dir / "ratios.svg")

        for report in reports:
            verdict = "PASS" if report.passed else "FAIL"
            worst = max(report.residuals.values(), default=0.0)
            click.echo(f"  {verdict}  {report.statement.value:<20} max residual {worst:.3e}")
            for name in report.failures:
                click.echo(f"        {name} = {report.residuals[name]:.3e} > {report.tolerances[name]:.1e}")
        failed = [report.statement.value for report in reports if not report.passed]
        click.echo(f"{len(reports) - len(failed)}/{len(reports)} statements passed; report: {bundle_path}")

    if failed:
        logger.warning("Verification failed", extra={"failed": failed})
        raise SystemExit(ExitCode.VERIFICATION_FAILED)


__all__ = ["cli_verify", "residual_rows"]

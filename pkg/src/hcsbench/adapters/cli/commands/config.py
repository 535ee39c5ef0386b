"""``config``: show the merged layered configuration."""

from __future__ import annotations

import logging

import lib_log_rich.runtime
import rich_click as click
from lib_layered_config import Config

from hcsbench.adapters.config.overrides import apply_overrides
from hcsbench.adapters.config.run_config import load_run_config, load_tolerances
from hcsbench.domain.enums import OutputFormat

from ..constants import CLICK_CONTEXT_SETTINGS
from ..context import CLIContext, get_cli_context
from ..exit_codes import ExitCode
from ..typed_click import option
from ._shared import FORMAT, reported_errors

logger = logging.getLogger(__name__)


@click.command("config", context_settings=CLICK_CONTEXT_SETTINGS)
@FORMAT
@option("--section", type=str, default=None, help="Show only one section (e.g. 'run', 'tolerances')")
@option("--profile", type=str, default=None, help="Override the root --profile for this display")
@option("--check", is_flag=True, default=False, help="Also validate [run] and [tolerances]; exit 78 when invalid")
@click.pass_context
def cli_config(
    ctx: click.Context, output_format: str, section: str | None, profile: str | None, check: bool
) -> None:
    """Display the configuration merged from defaults, files, .env and environment.

    Precedence: defaults -> app -> host -> user -> dotenv -> env -> --set.
    """
    cli_ctx = get_cli_context(ctx)
    effective_config, effective_profile = _resolve_config(cli_ctx, profile)
    fmt = OutputFormat(output_format.lower())

    extra = {"command": "config", "format": fmt.value, "profile": effective_profile}
    with lib_log_rich.runtime.bind(job_id="cli-config", extra=extra):
        logger.info("Displaying configuration", extra={"section": section})
        if check:
            _validate(effective_config)
        try:
            cli_ctx.services.display_config(
                effective_config, output_format=fmt, section=section, profile=effective_profile
            )
        except ValueError as exc:
            click.echo(f"\nError: {exc}", err=True)
            raise SystemExit(ExitCode.INVALID_ARGUMENT) from exc


def _validate(config: Config) -> None:
    with reported_errors("config"):
        run = load_run_config(config)
        load_tolerances(config)
        run.require_admissible_d()
    click.echo(f"configuration valid: group {run.group}, n = {run.ambient_n}, d = {run.d:g}")


def _resolve_config(cli_ctx: CLIContext, profile: str | None) -> tuple[Config, str | None]:
    """Reload with a subcommand-level profile, reapplying the root ``--set`` overrides."""
    if profile:
        config = cli_ctx.services.get_config(profile=profile)
        return apply_overrides(config, cli_ctx.set_overrides), profile
    return cli_ctx.config, cli_ctx.profile


__all__ = ["cli_config"]

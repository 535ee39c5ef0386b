"""``info``: installation metadata and the names the other commands accept."""

from __future__ import annotations

import logging

import lib_log_rich.runtime
import rich_click as click

from hcsbench import __init__conf__
from hcsbench.application.workbench import LIE_GROUPS
from hcsbench.domain.discrete_group import BUILTIN_GROUPS
from hcsbench.domain.enums import Statement, XiMethod
from hcsbench.domain.lie_core import KILLING_SCALE_NOTE

from ..constants import CLICK_CONTEXT_SETTINGS

logger = logging.getLogger(__name__)


@click.command("info", context_settings=CLICK_CONTEXT_SETTINGS)
def cli_info() -> None:
    """Print package metadata, known groups, Xi backends and statement ids.

    Example:
        >>> from click.testing import CliRunner
        >>> result = CliRunner().invoke(cli_info)
        >>> result.exit_code == 0 and "lemma-cs" in result.output
        True
    """
    with lib_log_rich.runtime.bind(job_id="cli-info", extra={"command": "info"}):
        logger.info("Displaying package information")
        __init__conf__.print_info()
        click.echo(f"    {'groups':<13} = {', '.join(BUILTIN_GROUPS)} (ambient: {', '.join(LIE_GROUPS)})")
        click.echo(f"    {'xi backends':<13} = {', '.join(m.value for m in XiMethod)}")
        click.echo(f"    {'statements':<13} = {', '.join(s.value for s in Statement)}")
        click.echo(f"    {'length':<13} = {KILLING_SCALE_NOTE}")


__all__ = ["cli_info"]

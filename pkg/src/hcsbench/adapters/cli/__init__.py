"""Command-line interface: root group, subcommands and the entry wrapper.

Contents:
    * Root command group from :mod:`.root`
    * Entry point from :mod:`.main`
    * Subcommands from :mod:`.commands`
    * Context helpers and traceback state from :mod:`.context`
"""

from __future__ import annotations

from .commands import (
    cli_ball,
    cli_cartan,
    cli_cd,
    cli_config,
    cli_info,
    cli_norms,
    cli_plot,
    cli_verify,
    cli_xi,
)
from .constants import CLICK_CONTEXT_SETTINGS, TRACEBACK_SUMMARY_LIMIT, TRACEBACK_VERBOSE_LIMIT
from .context import (
    CLIContext,
    TracebackState,
    apply_traceback_preferences,
    restore_traceback_state,
    snapshot_traceback_state,
    store_cli_context,
)
from .exit_codes import ExitCode
from .main import main
from .root import cli

__all__ = [
    "CLICK_CONTEXT_SETTINGS",
    "TRACEBACK_SUMMARY_LIMIT",
    "TRACEBACK_VERBOSE_LIMIT",
    "CLIContext",
    "ExitCode",
    "TracebackState",
    "apply_traceback_preferences",
    "cli",
    "cli_ball",
    "cli_cartan",
    "cli_cd",
    "cli_config",
    "cli_info",
    "cli_norms",
    "cli_plot",
    "cli_verify",
    "cli_xi",
    "main",
    "restore_traceback_state",
    "snapshot_traceback_state",
    "store_cli_context",
]

"""``cartan``: decompose a matrix literal as k1·exp(h)·k2."""

from __future__ import annotations

import logging

import lib_log_rich.runtime
import rich_click as click

from hcsbench.application.workbench import cartan_summary
from hcsbench.domain.enums import OutputFormat

from ..constants import CLICK_CONTEXT_SETTINGS
from ..typed_click import option
from ._shared import FORMAT, echo_payload, reported_errors

logger = logging.getLogger(__name__)


@click.command("cartan", context_settings=CLICK_CONTEXT_SETTINGS)
@option("--matrix", required=True, type=str, help='Element of SL(n,R) as "a,b;c,d" (rows separated by ";")')
@FORMAT
def cli_cartan(matrix: str, output_format: str) -> None:
    r"""Print the Cartan triple (k1, h, k2), the length L and the reconstruction error.

    \b
    Example:
        hcsbench cartan --matrix "2,1;1,1"
    """
    fmt = OutputFormat(output_format.lower())
    with lib_log_rich.runtime.bind(job_id="cli-cartan", extra={"command": "cartan"}), reported_errors("cartan"):
        summary = cartan_summary(matrix)
        logger.info("Cartan decomposition", extra={"h": summary.h, "error": summary.reconstruction_error})
        echo_payload(summary.to_dict(), fmt)


__all__ = ["cli_cartan"]

"""Helpers shared by the workbench commands.

Contents:
    * :func:`reported_errors` - map domain exceptions to exit codes.
    * :func:`run_flags` - drop flags the user did not give.
    * :func:`echo_payload` - print a mapping as aligned text or JSON.
    * Reusable option decorators (``GROUP``, ``D``, ``OUT``, ...).
"""

from __future__ import annotations

import logging
from collections.abc import Callable, Iterator, Mapping
from contextlib import contextmanager
from pathlib import Path
from typing import Any

import orjson
import rich_click as click

from hcsbench.domain.enums import OutputFormat, XiMethod
from hcsbench.domain.errors import ConfigurationError, HcsBenchError, ReportNotFoundError

from ..exit_codes import ExitCode
from ..typed_click import option

logger = logging.getLogger(__name__)

_CommandDecorator = Callable[[Callable[..., Any]], Callable[..., Any]]


@contextmanager
def reported_errors(command: str) -> Iterator[None]:
    """Print domain errors as one line on stderr and exit with their code.

    ``ConfigurationError`` exits 78, a missing report bundle exits 2 and every
    other ``HcsBenchError`` exits 22.
    Other exceptions propagate to ``lib_cli_exit_tools``.
    """
    try:
        yield
    except ConfigurationError as exc:
        logger.error("Invalid configuration", extra={"command": command, "error": str(exc)})
        click.echo(f"Error: {exc}", err=True)
        raise SystemExit(ExitCode.CONFIG_ERROR) from exc
    except ReportNotFoundError as exc:
        logger.error("Missing input file", extra={"command": command, "path": str(exc.path)})
        click.echo(f"Error: {exc}", err=True)
        raise SystemExit(ExitCode.FILE_NOT_FOUND) from exc
    except HcsBenchError as exc:
        logger.error(
            "Numerical precondition failed",
            extra={"command": command, "error": str(exc), "error_type": type(exc).__name__},
        )
        click.echo(f"Error: {exc}", err=True)
        raise SystemExit(ExitCode.INVALID_ARGUMENT) from exc


def run_flags(**flags: Any) -> dict[str, Any]:
    """Keep the flags that were given; ``None`` and ``()`` mean "use the configuration".

    Example:
        >>> run_flags(d=3.0, seed=None, generators=())
        {'d': 3.0}
    """
    return {key: value for key, value in flags.items() if value is not None and value != ()}


def _format_value(value: Any) -> str:
    if isinstance(value, float):
        return f"{value:.10g}"
    if isinstance(value, list | tuple):
        return "(" + ", ".join(_format_value(item) for item in value) + ")"  # pyright: ignore[reportUnknownVariableType]
    return str(value)


def echo_payload(payload: Mapping[str, Any], output_format: OutputFormat) -> None:
    """Print ``payload`` as ``key: value`` lines or as one JSON document.

    Example:
        >>> echo_payload({"h": [0.5, -0.5], "length": 0.7071067812}, OutputFormat.HUMAN)
        h:      (0.5, -0.5)
        length: 0.7071067812
    """
    if output_format is OutputFormat.JSON:
        click.echo(orjson.dumps(dict(payload), option=orjson.OPT_INDENT_2 | orjson.OPT_SORT_KEYS).decode())
        return
    width = max((len(key) for key in payload), default=0) + 1
    for key, value in payload.items():
        click.echo(f"{key + ':':<{width}} {_format_value(value)}")


# ---------------------------------------------------------------------------
# Option decorators shared by several commands
# ---------------------------------------------------------------------------

FORMAT: _CommandDecorator = option(
    "--format",
    "output_format",
    type=click.Choice([f.value for f in OutputFormat], case_sensitive=False),
    default=OutputFormat.HUMAN.value,
    help="Output format (human-readable or JSON)",
)
GROUP: _CommandDecorator = option(
    "--group", type=str, default=None, help="sanov, sl2z, sl3z, or the ambient groups sl2, sl3 (run.group)"
)
GENERATORS: _CommandDecorator = option(
    "--generators",
    type=str,
    multiple=True,
    metavar="LITERAL",
    help='Generator matrix literal such as "1,2;0,1" (repeatable, run.generators)',
)
N: _CommandDecorator = option("--n", "n", type=click.IntRange(2, 3), default=None, help="Ambient dimension n (run.n)")
D: _CommandDecorator = option("--d", "d", type=float, default=None, help="Decay exponent d (run.d)")
RADIUS: _CommandDecorator = option("--radius", type=click.IntRange(min=1), default=None, help="Ball radius (run.radius)")
SEED: _CommandDecorator = option("--seed", type=click.IntRange(min=0), default=None, help="Base seed (run.seed)")
GRID: _CommandDecorator = option(
    "--grid", "grid_resolution", type=click.IntRange(min=4), default=None, help="Boundary grid points (run.grid_resolution)"
)
METHOD: _CommandDecorator = option(
    "--method",
    type=click.Choice([m.value for m in XiMethod], case_sensitive=False),
    default=None,
    help="Xi backend (run.method); horocyclic is SL(2) only",
)
OUT: _CommandDecorator = option(
    "--out",
    "output_dir",
    type=click.Path(file_okay=False, path_type=Path),
    default=None,
    help="Output directory (run.output_dir)",
)
WORKERS: _CommandDecorator = option(
    "--workers", type=click.IntRange(min=0), default=None, help="Worker threads, 0 = all cores (run.workers)"
)
DETERMINISTIC: _CommandDecorator = option(
    "--deterministic/--no-deterministic",
    default=None,
    help="Ordered, exactly rounded reductions (run.deterministic)",
)


__all__ = [
    "D",
    "DETERMINISTIC",
    "FORMAT",
    "GENERATORS",
    "GRID",
    "GROUP",
    "METHOD",
    "N",
    "OUT",
    "RADIUS",
    "SEED",
    "WORKERS",
    "echo_payload",
    "reported_errors",
    "run_flags",
]

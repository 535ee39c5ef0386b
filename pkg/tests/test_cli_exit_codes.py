"""Exit code integration tests: one invocation per documented code."""

from __future__ import annotations

from collections.abc import Callable
from pathlib import Path
from typing import Any

import pytest
from click.testing import CliRunner, Result
from lib_layered_config import Config

from hcsbench.adapters import cli as cli_mod
from hcsbench.adapters.cli.exit_codes import ExitCode

Inject = Callable[[Config], Callable[[], Any]]


@pytest.mark.os_agnostic
def test_exit_codes_are_distinct() -> None:
    """No two outcomes share a code."""
    values = [int(code) for code in ExitCode]
    assert len(values) == len(set(values))


@pytest.mark.os_agnostic
@pytest.mark.parametrize(
    ("args", "expected"),
    [
        (["info"], ExitCode.SUCCESS),
        (["cd", "--d", "2", "--cutoff", "5"], ExitCode.SUCCESS),
        (["--set", "tolerances.boundedness=1.0", "verify", "--suite", "prop-discrete"], ExitCode.VERIFICATION_FAILED),
        (["--set", "run.ball_cap=10", "ball", "--radius", "2"], ExitCode.INVALID_ARGUMENT),
        (["config", "--section", "nonexistent"], ExitCode.INVALID_ARGUMENT),
        (["cartan", "--matrix", "1,2;3"], ExitCode.CONFIG_ERROR),
        (["cd", "--d", "1"], ExitCode.CONFIG_ERROR),
    ],
    ids=["info", "cd", "verify-fails", "ball-cap", "missing-section", "bad-literal", "inadmissible-d"],
)
def test_command_outcomes_map_to_exit_codes(
    cli_runner: CliRunner,
    inject_config: Inject,
    fast_config: Callable[..., Config],
    args: list[str],
    expected: ExitCode,
) -> None:
    """Each failure class leaves the CLI with its own code."""
    result: Result = cli_runner.invoke(cli_mod.cli, args, obj=inject_config(fast_config()))

    assert result.exit_code == expected, result.output


@pytest.mark.os_agnostic
def test_missing_report_bundle_exits_2(
    cli_runner: CliRunner, inject_config: Inject, fast_config: Callable[..., Config], tmp_path: Path
) -> None:
    """plot --report on an absent bundle is a missing file."""
    result = cli_runner.invoke(
        cli_mod.cli, ["plot", "--report", str(tmp_path / "nowhere"), "--out", str(tmp_path)], obj=inject_config(fast_config())
    )

    assert result.exit_code == ExitCode.FILE_NOT_FOUND


@pytest.mark.os_agnostic
def test_configuration_errors_print_an_error_line(
    cli_runner: CliRunner, inject_config: Inject, fast_config: Callable[..., Config]
) -> None:
    """EX_CONFIG failures explain themselves on stderr."""
    result = cli_runner.invoke(cli_mod.cli, ["verify"], obj=inject_config(fast_config(radius=0)))

    assert result.exit_code == ExitCode.CONFIG_ERROR
    assert "run.radius" in result.stderr

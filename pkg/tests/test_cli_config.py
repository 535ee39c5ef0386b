"""CLI config stories: display, JSON format, sections, --check, profiles and --set."""

from __future__ import annotations

from collections.abc import Callable
from typing import Any

import orjson
import pytest
from click.testing import CliRunner, Result
from lib_layered_config import Config

from hcsbench.adapters import cli as cli_mod
from hcsbench.adapters.cli.exit_codes import ExitCode
from hcsbench.adapters.config import loader as config_mod
from hcsbench.adapters.config.run_config import load_run_config, load_tolerances
from hcsbench.domain.tolerances import DEFAULT_TOLERANCES

Inject = Callable[[Config], Callable[[], Any]]


def _run_section(stdout: str) -> dict[str, Any]:
    payload: dict[str, Any] = orjson.loads(stdout)
    return payload.get("run", payload)


# ======================== packaged defaults ========================


@pytest.mark.os_agnostic
def test_packaged_defaults_validate(clear_config_cache: None) -> None:
    """defaultconfig.d describes a valid Sanov run with the built-in thresholds."""
    config = config_mod.get_config()

    run = load_run_config(config)
    assert run.group == "sanov"
    assert run.truncation_radius > max(run.support_radii)
    assert load_tolerances(config) == DEFAULT_TOLERANCES


@pytest.mark.os_agnostic
def test_invalid_profile_names_are_rejected(clear_config_cache: None) -> None:
    """Path separators never reach the file layers."""
    with pytest.raises(ValueError):
        config_mod.get_config(profile="../etc")


@pytest.mark.os_agnostic
def test_config_with_production_services_prints_json(cli_runner: CliRunner, production_factory: Callable[[], Any]) -> None:
    """The merged configuration renders as one JSON document."""
    result: Result = cli_runner.invoke(cli_mod.cli, ["config", "--format", "json"], obj=production_factory)

    assert result.exit_code == 0
    assert "{" in result.stdout


# ======================== sections ========================


@pytest.mark.os_agnostic
def test_config_shows_the_run_section(cli_runner: CliRunner, inject_config: Inject, config_factory: Callable[[dict[str, Any]], Config]) -> None:
    """Keys and values of [run] are displayed."""
    factory = inject_config(config_factory({"run": {"group": "sl2z", "d": 3.0}, "tolerances": {"grid": 1e-7}}))

    result = cli_runner.invoke(cli_mod.cli, ["config", "--section", "run"], obj=factory)

    assert result.exit_code == 0
    assert "sl2z" in result.stdout
    assert "tolerances" not in result.stdout


@pytest.mark.os_agnostic
def test_config_section_as_json(cli_runner: CliRunner, inject_config: Inject, config_factory: Callable[[dict[str, Any]], Config]) -> None:
    """JSON output of one section parses."""
    factory = inject_config(config_factory({"tolerances": {"boundedness": 3.0}}))

    result = cli_runner.invoke(cli_mod.cli, ["config", "--format", "json", "--section", "tolerances"], obj=factory)

    assert result.exit_code == 0
    assert "boundedness" in result.stdout
    assert orjson.loads(result.stdout)


@pytest.mark.os_agnostic
def test_missing_section_exits_22(cli_runner: CliRunner, inject_config: Inject, config_factory: Callable[[dict[str, Any]], Config]) -> None:
    """An unknown section is an invalid argument."""
    factory = inject_config(config_factory({"run": {"d": 2.0}}))

    result = cli_runner.invoke(cli_mod.cli, ["config", "--section", "nonexistent"], obj=factory)

    assert result.exit_code == ExitCode.INVALID_ARGUMENT
    assert "not found" in result.stderr


# ======================== --check ========================


@pytest.mark.os_agnostic
def test_check_confirms_a_valid_configuration(
    cli_runner: CliRunner, inject_config: Inject, config_factory: Callable[[dict[str, Any]], Config]
) -> None:
    """A summary line precedes the display."""
    factory = inject_config(config_factory({"run": {"group": "sl3z", "d": 5.0}}))

    result = cli_runner.invoke(cli_mod.cli, ["config", "--check"], obj=factory)

    assert result.exit_code == 0
    assert "configuration valid: group sl3z, n = 3, d = 5" in result.stdout


@pytest.mark.os_agnostic
@pytest.mark.parametrize(
    ("data", "fragment"),
    [
        ({"run": {"radius": 0}}, "run.radius"),
        ({"run": {"group": "sl3z", "d": 3.0}}, "need d > 4"),
        ({"tolerances": {"grid": -1.0}}, "tolerances.grid"),
    ],
)
def test_check_reports_invalid_values_with_exit_78(
    cli_runner: CliRunner,
    inject_config: Inject,
    config_factory: Callable[[dict[str, Any]], Config],
    data: dict[str, Any],
    fragment: str,
) -> None:
    """Validation errors name the key and exit EX_CONFIG."""
    result = cli_runner.invoke(cli_mod.cli, ["config", "--check"], obj=inject_config(config_factory(data)))

    assert result.exit_code == ExitCode.CONFIG_ERROR
    assert fragment in result.stderr


# ======================== --set and profiles ========================


@pytest.mark.os_agnostic
def test_set_override_is_visible_in_the_display(
    cli_runner: CliRunner, inject_config: Inject, config_factory: Callable[[dict[str, Any]], Config]
) -> None:
    """Root --set values reach every subcommand."""
    factory = inject_config(config_factory({"run": {"group": "sanov", "seed": 42}}))

    result = cli_runner.invoke(
        cli_mod.cli, ["--set", "run.seed=7", "config", "--format", "json", "--section", "run"], obj=factory
    )

    assert result.exit_code == 0
    assert _run_section(result.stdout)["seed"] == 7


@pytest.mark.os_agnostic
def test_malformed_set_override_is_a_usage_error(
    cli_runner: CliRunner, inject_config: Inject, config_factory: Callable[[dict[str, Any]], Config]
) -> None:
    """Click reports the parse error and exits 2."""
    result = cli_runner.invoke(cli_mod.cli, ["--set", "run.seed", "config"], obj=inject_config(config_factory({})))

    assert result.exit_code == 2
    assert "must contain '='" in result.stderr


@pytest.mark.os_agnostic
def test_subcommand_profile_reapplies_root_overrides(cli_runner: CliRunner, output_spy: Any, clear_config_cache: None) -> None:
    """config --profile reloads and keeps the --set values."""
    from dataclasses import replace

    from hcsbench.composition import build_production, build_testing

    requested: list[str | None] = []

    def fake_get_config(*, profile: str | None = None, start_dir: str | None = None) -> Config:
        requested.append(profile)
        return Config({"run": {"seed": 1}}, {})

    services = replace(build_testing(spy=output_spy), get_config=fake_get_config, display_config=build_production().display_config)

    result = cli_runner.invoke(
        cli_mod.cli,
        ["--set", "run.seed=9", "config", "--profile", "ci", "--format", "json", "--section", "run"],
        obj=lambda: services,
    )

    assert result.exit_code == 0
    assert requested == [None, "ci"]
    assert _run_section(result.stdout)["seed"] == 9

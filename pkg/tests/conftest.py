"""Shared pytest fixtures for the numerical, adapter and CLI tests.

All shared fixtures live here; tests receive them through pytest's conftest
discovery. Balls are built once per session because enumeration dominates
the runtime of the small-radius tests.
"""

from __future__ import annotations

import contextlib
import os
import re
import tempfile
from collections.abc import Callable, Iterator
from dataclasses import fields, replace
from pathlib import Path
from typing import TYPE_CHECKING, Any

import lib_cli_exit_tools
import numpy as np
import pytest
from click.testing import CliRunner
from lib_layered_config import Config

if TYPE_CHECKING:
    from hcsbench.adapters.memory.output import OutputSpy
    from hcsbench.composition import AppServices
    from hcsbench.domain.discrete_group import BallIndex

_COVERAGE_BASENAME = ".coverage.hcsbench"


def _purge_stale_coverage_files(cov_path: Path) -> None:
    """Delete leftover SQLite database and journal files from crashed runs."""
    for suffix in ("", "-journal", "-wal", "-shm"):
        with contextlib.suppress(FileNotFoundError):
            Path(str(cov_path) + suffix).unlink()


def pytest_configure(config: pytest.Config) -> None:
    """Redirect the coverage database to a local temp directory.

    Runs before ``pytest-cov`` creates its ``Coverage()`` object, so the
    ``COVERAGE_FILE`` value is honoured however pytest is invoked.
    """
    if "COVERAGE_FILE" not in os.environ:
        cov_path = Path(tempfile.gettempdir()) / _COVERAGE_BASENAME
        _purge_stale_coverage_files(cov_path)
        os.environ["COVERAGE_FILE"] = str(cov_path)


ANSI_ESCAPE_PATTERN = re.compile(r"\x1B\[[0-?]*[ -/]*[@-~]")
CONFIG_FIELDS: tuple[str, ...] = tuple(field.name for field in fields(type(lib_cli_exit_tools.config)))

#: Small, fast settings for CLI runs that reach the numerics.
FAST_RUN: dict[str, Any] = {
    "grid_resolution": 256,
    "euler_resolution": 6,
    "pi_resolution": 96,
    "k_resolution": 8,
    "chamber_cutoff": 12.0,
    "radius": 3,
    "truncation_radius": 4,
    "support_radii": [1, 2],
    "convolution_radii": [1, 2],
    "corpus_size": 2,
    "radial_samples": 2,
    "mean_zero_samples": 1,
    "cs_samples": 10,
    "stability_sample": 8,
    "audit_radius": 1,
    "workers": 1,
}


def _snapshot_cli_config() -> dict[str, object]:
    return {name: getattr(lib_cli_exit_tools.config, name) for name in CONFIG_FIELDS}


def _restore_cli_config(snapshot: dict[str, object]) -> None:
    for name, value in snapshot.items():
        setattr(lib_cli_exit_tools.config, name, value)


# ======================== CLI plumbing ========================


@pytest.fixture
def cli_runner() -> CliRunner:
    """Provide a fresh CliRunner per test; use ``result.stdout`` for parseable output."""
    return CliRunner()


@pytest.fixture
def production_factory() -> Callable[[], AppServices]:
    """Provide the production services factory."""
    from hcsbench.composition import build_production

    return build_production


@pytest.fixture
def strip_ansi() -> Callable[[str], str]:
    """Return a helper that strips ANSI escape sequences from a string."""

    def _strip(value: str) -> str:
        return ANSI_ESCAPE_PATTERN.sub("", value)

    return _strip


@pytest.fixture
def managed_traceback_state() -> Iterator[None]:
    """Reset traceback flags to a known baseline and restore them after the test."""
    lib_cli_exit_tools.reset_config()
    lib_cli_exit_tools.config.traceback = False
    lib_cli_exit_tools.config.traceback_force_color = False
    snapshot = _snapshot_cli_config()
    try:
        yield
    finally:
        _restore_cli_config(snapshot)


@pytest.fixture
def clear_config_cache() -> Iterator[None]:
    """Clear the get_config lru_cache before the test (not after: it may be monkeypatched)."""
    from hcsbench.adapters.config import loader as config_mod

    config_mod.get_config.cache_clear()
    yield


@pytest.fixture
def config_factory() -> Callable[[dict[str, Any]], Config]:
    """Create real Config instances from plain dicts, without filesystem I/O."""

    def _factory(data: dict[str, Any]) -> Config:
        return Config(data, {})

    return _factory


@pytest.fixture
def output_spy() -> OutputSpy:
    """A fresh OutputSpy per test."""
    from hcsbench.adapters.memory.output import OutputSpy

    return OutputSpy()


@pytest.fixture
def inject_config(
    clear_config_cache: None,
    output_spy: OutputSpy,
) -> Callable[[Config], Callable[[], AppServices]]:
    """Return a factory wiring an injected Config and the test's OutputSpy.

    Only the I/O boundaries are replaced: ``get_config`` returns the given
    Config, output ports record into ``output_spy``, logging is a no-op.
    Display stays the production renderer so ``config`` output is real.
    """
    from hcsbench.composition import build_production, build_testing

    def _inject(config: Config) -> Callable[[], AppServices]:
        def _fake_get_config(**_kwargs: Any) -> Config:
            return config

        services = replace(
            build_testing(spy=output_spy),
            get_config=_fake_get_config,
            display_config=build_production().display_config,
        )
        return lambda: services

    return _inject


@pytest.fixture
def fast_config(config_factory: Callable[[dict[str, Any]], Config]) -> Callable[..., Config]:
    """Config with ``[run]`` shrunk to CLI-test scale; keyword arguments override keys."""

    def _factory(**run: Any) -> Config:
        return config_factory({"run": {**FAST_RUN, **run}})

    return _factory


# ======================== numerics ========================


@pytest.fixture
def rng() -> np.random.Generator:
    """Seeded generator so every numerical test is reproducible."""
    return np.random.default_rng(20240611)


@pytest.fixture(scope="session")
def sanov_ball() -> BallIndex:
    """Sanov ball of radius 3 (53 elements)."""
    from hcsbench.domain.discrete_group import builtin_presentation, generate_ball

    return generate_ball(builtin_presentation("sanov"), 3)


@pytest.fixture(scope="session")
def sl2z_ball() -> BallIndex:
    """SL(2,Z) ball of radius 3 on the elementary generators."""
    from hcsbench.domain.discrete_group import builtin_presentation, generate_ball

    return generate_ball(builtin_presentation("sl2z"), 3)

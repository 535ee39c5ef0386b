"""Composition root wiring adapters to application ports."""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING

# Configuration services
from ..adapters.config.display import display_config
from ..adapters.config.loader import get_config, get_default_config_path

# Logging services
from ..adapters.logging.setup import init_logging

# Output services
from ..adapters.output.plots import render_decay_plot, render_ratio_plot
from ..adapters.output.report_writer import load_report_bundle, write_json, write_report_bundle, write_table

# Static conformance assertions: pyright checks each adapter against its Protocol.
if TYPE_CHECKING:
    from ..adapters.memory.output import OutputSpy
    from ..application.ports import (
        DisplayConfig,
        GetConfig,
        GetDefaultConfigPath,
        InitLogging,
        LoadReportBundle,
        RenderDecayPlot,
        RenderRatioPlot,
        WriteJson,
        WriteReportBundle,
        WriteTable,
    )

    _assert_get_config: GetConfig = get_config
    _assert_get_default_config_path: GetDefaultConfigPath = get_default_config_path
    _assert_display_config: DisplayConfig = display_config
    _assert_init_logging: InitLogging = init_logging
    _assert_write_report_bundle: WriteReportBundle = write_report_bundle
    _assert_write_json: WriteJson = write_json
    _assert_write_table: WriteTable = write_table
    _assert_load_report_bundle: LoadReportBundle = load_report_bundle
    _assert_render_decay_plot: RenderDecayPlot = render_decay_plot
    _assert_render_ratio_plot: RenderRatioPlot = render_ratio_plot


@dataclass(frozen=True, slots=True)
class AppServices:
    """Frozen container holding all application port implementations."""

    get_config: GetConfig
    get_default_config_path: GetDefaultConfigPath
    display_config: DisplayConfig
    init_logging: InitLogging
    write_report_bundle: WriteReportBundle
    write_json: WriteJson
    write_table: WriteTable
    load_report_bundle: LoadReportBundle
    render_decay_plot: RenderDecayPlot
    render_ratio_plot: RenderRatioPlot


def build_production() -> AppServices:
    """Wire production adapters into an AppServices container."""
    return AppServices(
        get_config=get_config,
        get_default_config_path=get_default_config_path,
        display_config=display_config,
        init_logging=init_logging,
        write_report_bundle=write_report_bundle,
        write_json=write_json,
        write_table=write_table,
        load_report_bundle=load_report_bundle,
        render_decay_plot=render_decay_plot,
        render_ratio_plot=render_ratio_plot,
    )


def build_testing(*, spy: OutputSpy | None = None) -> AppServices:
    """Wire in-memory adapters into an AppServices container.

    Args:
        spy: OutputSpy that records every write. A fresh one is created
            when omitted; pass your own to assert on captured output.
    """
    from ..adapters.memory import (
        OutputSpy,
        display_config_in_memory,
        get_config_in_memory,
        get_default_config_path_in_memory,
        init_logging_in_memory,
    )

    output_spy = spy if spy is not None else OutputSpy()

    return AppServices(
        get_config=get_config_in_memory,
        get_default_config_path=get_default_config_path_in_memory,
        display_config=display_config_in_memory,
        init_logging=init_logging_in_memory,
        write_report_bundle=output_spy.write_report_bundle,
        write_json=output_spy.write_json,
        write_table=output_spy.write_table,
        load_report_bundle=output_spy.load_report_bundle,
        render_decay_plot=output_spy.render_decay_plot,
        render_ratio_plot=output_spy.render_ratio_plot,
    )


__all__ = [
    # Configuration
    "get_config",
    "get_default_config_path",
    "display_config",
    # Logging
    "init_logging",
    # Output
    "write_report_bundle",
    "write_json",
    "write_table",
    "load_report_bundle",
    "render_decay_plot",
    "render_ratio_plot",
    # Composition
    "AppServices",
    "build_production",
    "build_testing",
]

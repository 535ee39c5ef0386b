"""In-memory adapter implementations for testing.

Lightweight implementations of every application port that touch neither
the filesystem nor the logging runtime.

Contents:
    * :mod:`.config` - In-memory configuration adapters
    * :mod:`.output` - Recording output adapters (OutputSpy)
    * :mod:`.logging` - In-memory logging adapter
"""

from __future__ import annotations

from typing import TYPE_CHECKING

from .config import (
    display_config_in_memory,
    get_config_in_memory,
    get_default_config_path_in_memory,
)
from .logging import init_logging_in_memory
from .output import BundleRecord, OutputSpy

# Static conformance assertions
if TYPE_CHECKING:
    from hcsbench.application.ports import (
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

    _spy = OutputSpy()
    _assert_get_config: GetConfig = get_config_in_memory
    _assert_get_default_config_path: GetDefaultConfigPath = get_default_config_path_in_memory
    _assert_display_config: DisplayConfig = display_config_in_memory
    _assert_init_logging: InitLogging = init_logging_in_memory
    _assert_write_report_bundle: WriteReportBundle = _spy.write_report_bundle
    _assert_write_json: WriteJson = _spy.write_json
    _assert_write_table: WriteTable = _spy.write_table
    _assert_load_report_bundle: LoadReportBundle = _spy.load_report_bundle
    _assert_render_decay_plot: RenderDecayPlot = _spy.render_decay_plot
    _assert_render_ratio_plot: RenderRatioPlot = _spy.render_ratio_plot

__all__ = [
    "BundleRecord",
    "OutputSpy",
    "display_config_in_memory",
    "get_config_in_memory",
    "get_default_config_path_in_memory",
    "init_logging_in_memory",
]

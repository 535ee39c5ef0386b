"""Application layer - use cases and port definitions.

Contains the verification suite and the inspection use cases that
orchestrate the numerical domain, plus the port protocols adapters
implement.

Contents:
    * :mod:`.ports` - Callable Protocol definitions for adapter functions
    * :mod:`.verify_suite` - One use case per checkable statement
    * :mod:`.workbench` - cartan/xi/cd/ball/norms/plot use cases
"""

from __future__ import annotations

from .ports import (
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

__all__ = [
    "DisplayConfig",
    "GetConfig",
    "GetDefaultConfigPath",
    "InitLogging",
    "LoadReportBundle",
    "RenderDecayPlot",
    "RenderRatioPlot",
    "WriteJson",
    "WriteReportBundle",
    "WriteTable",
]

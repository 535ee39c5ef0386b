"""Adapters layer - infrastructure and framework integrations.

Contains adapter implementations that connect the application to external
systems and frameworks (CLI, configuration, logging, report output).

Contents:
    * :mod:`.config` - Configuration loading, overrides, typed run tables and display
    * :mod:`.output` - Report bundles, CSV tables and SVG plots
    * :mod:`.memory` - In-memory adapters for tests
    * :mod:`.logging` - Logging setup with lib_log_rich
    * :mod:`.cli` - Click CLI framework integration
"""

from __future__ import annotations

__all__: list[str] = []

"""Output adapter - report bundles, tables and SVG figures.

Contents:
    * :mod:`.report_writer` - JSON report bundles and CSV tables (orjson)
    * :mod:`.plots` - matplotlib figures rendered headless to SVG
"""

from __future__ import annotations

from .plots import render_decay_plot, render_ratio_plot
from .report_writer import config_hash, load_report_bundle, write_json, write_report_bundle, write_table

__all__ = [
    "config_hash",
    "load_report_bundle",
    "render_decay_plot",
    "render_ratio_plot",
    "write_json",
    "write_report_bundle",
    "write_table",
]

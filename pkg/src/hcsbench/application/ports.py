"""Application ports: callable Protocol definitions for adapter functions.

Each Protocol class defines a ``__call__`` method whose signature exactly
matches the corresponding adapter function.  Module-level adapter functions
and the bound methods of the in-memory spies satisfy these protocols via
structural subtyping (PEP 544).

System Role:
    Sits between domain and adapters.  Infrastructure types (``Config``) are
    imported under ``TYPE_CHECKING`` only so that import-linter layer
    contracts remain satisfied at runtime.
"""

from __future__ import annotations

from collections.abc import Mapping, Sequence
from pathlib import Path
from typing import TYPE_CHECKING, Any, Protocol

import numpy.typing as npt

from ..domain.enums import OutputFormat
from ..domain.reports import VerificationReport

if TYPE_CHECKING:
    from lib_layered_config import Config


class GetConfig(Protocol):
    """Load layered configuration with application defaults."""

    def __call__(self, *, profile: str | None = ..., start_dir: str | None = ...) -> Config: ...


class GetDefaultConfigPath(Protocol):
    """Return the path to the bundled default configuration file."""

    def __call__(self) -> Path: ...


class DisplayConfig(Protocol):
    """Display the provided configuration in the requested format."""

    def __call__(
        self, config: Config, *, output_format: OutputFormat = ..., section: str | None = ..., profile: str | None = ...
    ) -> None: ...


class InitLogging(Protocol):
    """Initialize lib_log_rich runtime with the provided configuration."""

    def __call__(self, config: Config) -> None: ...


class WriteReportBundle(Protocol):
    """Serialize verification reports with the run configuration into ``out_dir``."""

    def __call__(
        self, reports: Sequence[VerificationReport], *, run_config: Mapping[str, Any], out_dir: Path
    ) -> Path: ...


class WriteJson(Protocol):
    """Write one JSON document (sorted keys)."""

    def __call__(self, payload: Mapping[str, Any], path: Path) -> Path: ...


class WriteTable(Protocol):
    """Write homogeneous rows as a CSV table."""

    def __call__(self, rows: Sequence[Mapping[str, Any]], path: Path) -> Path: ...


class LoadReportBundle(Protocol):
    """Read a report bundle back as (run configuration, reports)."""

    def __call__(self, path: Path) -> tuple[dict[str, Any], list[VerificationReport]]: ...


class RenderDecayPlot(Protocol):
    """Plot Ξ(a_t) against its e^{−ρ} envelope as SVG."""

    def __call__(self, t: npt.ArrayLike, xi: npt.ArrayLike, envelope: npt.ArrayLike, path: Path) -> Path: ...


class RenderRatioPlot(Protocol):
    """Plot per-statement ratio sequences as SVG."""

    def __call__(self, sequences: Mapping[str, Mapping[str, Sequence[float]]], path: Path) -> Path: ...


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

"""Recording stand-ins for the output ports.

:class:`OutputSpy` keeps every payload it is handed instead of touching the
filesystem, so CLI tests can assert on what a command would have written.
"""

from __future__ import annotations

from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np
import numpy.typing as npt

from ...domain.errors import ReportNotFoundError
from ...domain.reports import VerificationReport


@dataclass(frozen=True, slots=True)
class BundleRecord:
    """One captured ``write_report_bundle`` call."""

    reports: tuple[VerificationReport, ...]
    run_config: dict[str, Any]
    out_dir: Path


@dataclass
class OutputSpy:
    """Captures writes and plots for test assertions.

    Create one spy per test. The bound methods match the output port
    signatures expected by AppServices and return the path they were given.

    Example:
        >>> spy = OutputSpy()
        >>> spy.write_json({"d": 2}, Path("out/cd.json")).name
        'cd.json'
        >>> spy.json_documents[Path("out/cd.json")]
        {'d': 2}
    """

    bundles: list[BundleRecord] = field(default_factory=lambda: list[BundleRecord]())
    json_documents: dict[Path, dict[str, Any]] = field(default_factory=lambda: dict[Path, dict[str, Any]]())
    tables: dict[Path, list[dict[str, Any]]] = field(default_factory=lambda: dict[Path, list[dict[str, Any]]]())
    plots: dict[Path, str] = field(default_factory=lambda: dict[Path, str]())
    decay_samples: dict[Path, npt.NDArray[np.float64]] = field(
        default_factory=lambda: dict[Path, npt.NDArray[np.float64]]()
    )
    raise_exception: Exception | None = None

    def clear(self) -> None:
        self.bundles.clear()
        self.json_documents.clear()
        self.tables.clear()
        self.plots.clear()
        self.decay_samples.clear()
        self.raise_exception = None

    def _maybe_raise(self) -> None:
        if self.raise_exception is not None:
            raise self.raise_exception

    @property
    def last_bundle(self) -> BundleRecord:
        """Most recent bundle; raises AssertionError when nothing was written."""
        assert self.bundles, "no report bundle was written"
        return self.bundles[-1]

    def write_report_bundle(
        self,
        reports: Sequence[VerificationReport],
        *,
        run_config: Mapping[str, Any],
        out_dir: Path,
    ) -> Path:
        self._maybe_raise()
        self.bundles.append(BundleRecord(tuple(reports), dict(run_config), out_dir))
        return out_dir / "report.json"

    def write_json(self, payload: Mapping[str, Any], path: Path) -> Path:
        self._maybe_raise()
        self.json_documents[path] = dict(payload)
        return path

    def write_table(self, rows: Sequence[Mapping[str, Any]], path: Path) -> Path:
        self._maybe_raise()
        self.tables[path] = [dict(row) for row in rows]
        return path

    def load_report_bundle(self, path: Path) -> tuple[dict[str, Any], list[VerificationReport]]:
        """Return the newest recorded bundle written to ``path`` (or its ``report.json``)."""
        self._maybe_raise()
        for record in reversed(self.bundles):
            if path in (record.out_dir, record.out_dir / "report.json"):
                return dict(record.run_config), list(record.reports)
        raise ReportNotFoundError(path)

    def render_decay_plot(self, t: npt.ArrayLike, xi: npt.ArrayLike, envelope: npt.ArrayLike, path: Path) -> Path:
        self._maybe_raise()
        self.plots[path] = "decay"
        self.decay_samples[path] = np.asarray(xi, dtype=np.float64)
        return path

    def render_ratio_plot(self, sequences: Mapping[str, Mapping[str, Sequence[float]]], path: Path) -> Path:
        self._maybe_raise()
        self.plots[path] = "ratio"
        return path


__all__ = ["BundleRecord", "OutputSpy"]

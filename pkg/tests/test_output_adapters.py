"""Tests for the filesystem writers and the SVG renderers."""

from __future__ import annotations

import csv
from pathlib import Path

import orjson
import pytest

from hcsbench.adapters.output.plots import render_decay_plot, render_ratio_plot
from hcsbench.adapters.output.report_writer import (
    config_hash,
    load_report_bundle,
    write_json,
    write_report_bundle,
    write_table,
)
from hcsbench.domain.enums import Statement
from hcsbench.domain.errors import HcsBenchError, ReportNotFoundError
from hcsbench.domain.reports import VerificationReport

# ======================== report bundles ========================


@pytest.mark.os_agnostic
def test_bundle_survives_a_round_trip(tmp_path: Path) -> None:
    """Statement, residuals and verdict come back unchanged."""
    report = VerificationReport(
        Statement.CS_LEMMA, {"samples": 5}, {"violation": 0.0}, {"violation": 1e-10}, sequences={"ratio": [0.5, 0.7]}
    )
    path = write_report_bundle([report], run_config={"seed": 42, "d": 2.0}, out_dir=tmp_path)

    config, reports = load_report_bundle(tmp_path)

    assert path == tmp_path / "report.json"
    assert config == {"seed": 42, "d": 2.0}
    assert reports[0].statement is Statement.CS_LEMMA
    assert reports[0].passed


@pytest.mark.os_agnostic
def test_bundle_records_the_config_hash(tmp_path: Path) -> None:
    """The stored hash matches a fresh computation."""
    run_config = {"seed": 7, "group": "sanov"}
    path = write_report_bundle([], run_config=run_config, out_dir=tmp_path)

    payload = orjson.loads(path.read_bytes())

    assert payload["config_hash"] == config_hash(run_config)
    assert payload["passed"] is True
    assert payload["created_at"].endswith("+00:00")


@pytest.mark.os_agnostic
def test_missing_bundle_raises(tmp_path: Path) -> None:
    """An absent report.json is a ReportNotFoundError."""
    with pytest.raises(ReportNotFoundError):
        load_report_bundle(tmp_path / "report.json")


@pytest.mark.os_agnostic
def test_foreign_json_is_not_a_bundle(tmp_path: Path) -> None:
    """Any JSON object without reports is rejected."""
    path = write_json({"d": 2.0}, tmp_path / "cd.json")
    with pytest.raises(HcsBenchError, match="not a report bundle"):
        load_report_bundle(path)


# ======================== tables ========================


@pytest.mark.os_agnostic
def test_table_header_follows_the_first_row(tmp_path: Path) -> None:
    """Columns keep insertion order."""
    path = write_table([{"word": "a", "length": 1.0}, {"word": "b", "length": 1.0}], tmp_path / "ball.csv")

    with path.open(newline="", encoding="utf-8") as handle:
        rows = list(csv.reader(handle))

    assert rows[0] == ["word", "length"]
    assert len(rows) == 3


@pytest.mark.os_agnostic
def test_empty_table_is_an_empty_file(tmp_path: Path) -> None:
    """No rows, no header."""
    assert write_table([], tmp_path / "empty.csv").read_text(encoding="utf-8") == ""


# ======================== plots ========================


@pytest.mark.os_agnostic
def test_decay_plot_writes_svg(tmp_path: Path) -> None:
    """The file is an SVG document."""
    path = render_decay_plot([0.0, 1.0, 2.0], [1.0, 0.7, 0.4], [1.0, 0.9, 0.6], tmp_path / "decay.svg")
    assert "<svg" in path.read_text(encoding="utf-8")


@pytest.mark.os_agnostic
def test_ratio_plot_writes_svg(tmp_path: Path) -> None:
    """One line per named sequence."""
    sequences = {"summability": {"partial_sums": [1.0, 1.5, 1.7]}}
    path = render_ratio_plot(sequences, tmp_path / "ratios.svg")
    assert path.is_file()
    assert "<svg" in path.read_text(encoding="utf-8")

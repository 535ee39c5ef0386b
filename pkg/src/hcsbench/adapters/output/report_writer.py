"""Persist verification reports, ball tables and summaries.

A report bundle is one ``report.json`` holding the run configuration, its
sha256 hash, a UTC timestamp and the serialized reports. Two runs with the
same configuration and seed differ only in ``created_at``.
"""

from __future__ import annotations

import csv
import hashlib
import logging
from collections.abc import Mapping, Sequence
from datetime import datetime, timezone
from pathlib import Path
from typing import Any

import numpy as np
import orjson

from ...domain.errors import HcsBenchError, ReportNotFoundError
from ...domain.reports import VerificationReport

logger = logging.getLogger(__name__)

REPORT_FILENAME = "report.json"
_DUMP_OPTIONS = orjson.OPT_SORT_KEYS | orjson.OPT_INDENT_2 | orjson.OPT_SERIALIZE_NUMPY


def _default(value: object) -> object:
    """Serialize the few non-JSON types that reach the writers."""
    if isinstance(value, Path):
        return str(value)
    if isinstance(value, complex):
        return {"re": value.real, "im": value.imag}
    if isinstance(value, (set, frozenset)):
        return sorted(value, key=str)  # pyright: ignore[reportUnknownArgumentType]
    if isinstance(value, np.generic):
        return value.item()
    raise TypeError(f"Type is not JSON serializable: {type(value).__name__}")


def _dumps(payload: object) -> bytes:
    return orjson.dumps(payload, default=_default, option=_DUMP_OPTIONS)


def config_hash(run_config: Mapping[str, Any]) -> str:
    """sha256 of the sorted-key JSON encoding of ``run_config``.

    Example:
        >>> config_hash({"d": 2, "seed": 42}) == config_hash({"seed": 42, "d": 2})
        True
        >>> len(config_hash({}))
        64
    """
    return hashlib.sha256(orjson.dumps(dict(run_config), default=_default, option=orjson.OPT_SORT_KEYS)).hexdigest()


def write_json(payload: Mapping[str, Any], path: Path) -> Path:
    """Write ``payload`` as indented, key-sorted JSON and return ``path``."""
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(_dumps(dict(payload)))
    logger.debug("Wrote JSON", extra={"path": str(path)})
    return path


def write_table(rows: Sequence[Mapping[str, Any]], path: Path) -> Path:
    """Write ``rows`` as CSV; the header follows the key order of the first row.

    Complex cells are split by the caller (``value_re`` / ``value_im``).
    An empty ``rows`` still produces an empty file.
    """
    path.parent.mkdir(parents=True, exist_ok=True)
    fieldnames = list(rows[0]) if rows else []
    with path.open("w", newline="", encoding="utf-8") as handle:
        if fieldnames:
            writer = csv.DictWriter(handle, fieldnames=fieldnames, extrasaction="ignore")
            writer.writeheader()
            writer.writerows(rows)
    logger.debug("Wrote table", extra={"path": str(path), "rows": len(rows)})
    return path


def write_report_bundle(
    reports: Sequence[VerificationReport],
    *,
    run_config: Mapping[str, Any],
    out_dir: Path,
) -> Path:
    """Write ``out_dir/report.json`` and return its path."""
    bundle = {
        "config": dict(run_config),
        "config_hash": config_hash(run_config),
        "created_at": datetime.now(timezone.utc).isoformat(timespec="seconds"),
        "passed": all(report.passed for report in reports),
        "reports": [report.to_dict() for report in reports],
    }
    path = write_json(bundle, out_dir / REPORT_FILENAME)
    logger.info(
        "Report bundle written",
        extra={"path": str(path), "reports": len(reports), "config_hash": bundle["config_hash"]},
    )
    return path


def load_report_bundle(path: Path) -> tuple[dict[str, Any], list[VerificationReport]]:
    """Read a bundle written by :func:`write_report_bundle`.

    ``path`` may be the ``report.json`` file or the directory holding it.

    Raises:
        ReportNotFoundError: If the file does not exist.
        HcsBenchError: If it is not a report bundle.
    """
    target = path / REPORT_FILENAME if path.is_dir() else path
    try:
        payload: Any = orjson.loads(target.read_bytes())
    except FileNotFoundError as exc:
        raise ReportNotFoundError(target) from exc
    except orjson.JSONDecodeError as exc:
        raise HcsBenchError(f"report bundle is not valid JSON: {target}") from exc
    if not isinstance(payload, dict) or "reports" not in payload:
        raise HcsBenchError(f"not a report bundle: {target}")
    bundle: dict[str, Any] = payload  # pyright: ignore[reportUnknownVariableType]
    try:
        reports = [VerificationReport.from_dict(entry) for entry in bundle["reports"]]
    except (KeyError, ValueError) as exc:
        raise HcsBenchError(f"malformed report entry in {target}: {exc}") from exc
    return dict(bundle.get("config", {})), reports


__all__ = [
    "REPORT_FILENAME",
    "config_hash",
    "load_report_bundle",
    "write_json",
    "write_report_bundle",
    "write_table",
]

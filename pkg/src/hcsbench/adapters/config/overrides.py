"""Parse and apply ``--set SECTION.KEY=VALUE`` overrides to a Config."""

from __future__ import annotations

from dataclasses import dataclass
from typing import cast

import orjson
from lib_layered_config import Config

CoercedValue = str | int | float | bool | None | list[object] | dict[str, object]
"""Union of types that :func:`coerce_value` can produce."""


@dataclass(frozen=True, slots=True)
class ConfigOverride:
    """A single parsed configuration override."""

    section: str
    key_path: tuple[str, ...]
    value: CoercedValue


def parse_override(raw: str) -> ConfigOverride:
    """Split ``SECTION.KEY[.SUBKEY...]=VALUE`` at the first dot and the first ``=``.

    Raises:
        ValueError: If ``=`` or the section dot is missing, or a path
            component is empty.

    Examples:
        >>> override = parse_override("run.d=3")
        >>> override.section, override.key_path, override.value
        ('run', ('d',), 3)

        >>> parse_override("tolerances.grid=1e-8").value
        1e-08

        >>> parse_override("run.group=sl2z").value
        'sl2z'
    """
    if "=" not in raw:
        raise ValueError(f"Invalid override {raw!r}: must contain '='")

    path_part, value_str = raw.split("=", maxsplit=1)

    if "." not in path_part:
        raise ValueError(f"Invalid override {raw!r}: key must contain at least one dot (SECTION.KEY)")

    section, *key_parts = path_part.split(".")
    if not section:
        raise ValueError(f"Invalid override {raw!r}: section name is empty")
    if not all(key_parts):
        raise ValueError(f"Invalid override {raw!r}: key path contains empty component")

    return ConfigOverride(section=section, key_path=tuple(key_parts), value=coerce_value(value_str))


def coerce_value(raw: str) -> CoercedValue:
    """JSON-decode ``raw`` with orjson, falling back to the raw string.

    Examples:
        >>> coerce_value("true"), coerce_value("42"), coerce_value("2.5")
        (True, 42, 2.5)
        >>> coerce_value("null")
        >>> coerce_value('["2,1;1,1", "1,0;1,1"]')
        ['2,1;1,1', '1,0;1,1']
        >>> coerce_value("sanov")
        'sanov'
        >>> coerce_value("")
        ''
    """
    if raw == "":
        return ""
    try:
        return orjson.loads(raw)
    except (orjson.JSONDecodeError, ValueError):
        return raw


def _nest_override(target: dict[str, dict[str, object]], override: ConfigOverride) -> None:
    """Insert ``override`` into a nested dict, creating intermediate tables.

    Examples:
        >>> d: dict[str, dict[str, object]] = {}
        >>> _nest_override(d, ConfigOverride(section="run", key_path=("seed",), value=7))
        >>> d["run"]["seed"]
        7
        >>> _nest_override(d, ConfigOverride(section="lib_log_rich", key_path=("payload", "max"), value=3))
        >>> d["lib_log_rich"]["payload"]["max"]
        3
    """
    node: dict[str, object] = target.setdefault(override.section, {})
    for part in override.key_path[:-1]:
        existing = node.setdefault(part, {})
        if not isinstance(existing, dict):
            raise TypeError(f"Expected dict at key {part!r}, got {type(existing).__name__}")
        node = cast("dict[str, object]", existing)
    node[override.key_path[-1]] = override.value


def apply_overrides(config: Config, raw_overrides: tuple[str, ...]) -> Config:
    """Deep-merge ``--set`` overrides into ``config`` via ``Config.with_overrides``.

    Examples:
        >>> cfg = Config({"run": {"d": 2}}, {"run.d": {"layer": "default", "path": None, "key": "run.d"}})
        >>> apply_overrides(cfg, ("run.d=3",))["run"]["d"]
        3
        >>> apply_overrides(cfg, ()) is cfg
        True
    """
    if not raw_overrides:
        return config

    overrides: dict[str, dict[str, object]] = {}
    for raw in raw_overrides:
        _nest_override(overrides, parse_override(raw))

    return config.with_overrides(overrides)


__all__ = [
    "CoercedValue",
    "ConfigOverride",
    "apply_overrides",
    "coerce_value",
    "parse_override",
]

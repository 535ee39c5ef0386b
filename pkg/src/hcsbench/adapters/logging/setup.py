"""lib_log_rich runtime setup shared by every entry point.

The console script, ``python -m hcsbench`` and the CLI tests all call
:func:`init_logging`; the runtime is initialised once per process and the
standard ``logging`` loggers of the numerical modules are bridged into it.
"""

from __future__ import annotations

import logging
from typing import cast

import lib_log_rich.config
import lib_log_rich.runtime
from lib_layered_config import Config
from pydantic import BaseModel, ConfigDict, field_validator

from hcsbench import __init__conf__

#: Third-party loggers that flood DEBUG output while plots are rendered.
QUIET_LOGGERS: tuple[str, ...] = ("matplotlib", "PIL")


class LoggingConfigModel(BaseModel):
    """The ``[lib_log_rich]`` table; unknown keys pass through to RuntimeConfig.

    Example:
        >>> LoggingConfigModel(service="hcsbench-ci").service
        'hcsbench-ci'
        >>> LoggingConfigModel().environment
        'prod'
        >>> LoggingConfigModel(service="  ").service is None
        True
    """

    service: str | None = None
    environment: str = "prod"

    model_config = ConfigDict(extra="allow")

    @field_validator("service", mode="before")
    @classmethod
    def _blank_service_to_none(cls, v: str | None) -> str | None:
        if isinstance(v, str) and not v.strip():
            return None
        return v


def _build_runtime_config(config: Config) -> lib_log_rich.runtime.RuntimeConfig:
    """Map ``[lib_log_rich]`` onto RuntimeConfig; the service defaults to the package name."""
    log_raw: object = config.get("lib_log_rich", default={})
    parsed = LoggingConfigModel.model_validate(cast("dict[str, object]", log_raw) if log_raw else {})
    extra_config = parsed.model_dump(exclude={"service", "environment"}, exclude_none=True)
    return lib_log_rich.runtime.RuntimeConfig(
        service=parsed.service or __init__conf__.name,
        environment=parsed.environment,
        **extra_config,
    )


def init_logging(config: Config) -> None:
    """Initialise lib_log_rich from ``config`` unless it is already running.

    Loads ``.env`` first so ``LOG_*`` variables apply, then bridges the
    standard library loggers used by the domain and application layers.

    Example:
        >>> config = Config({"lib_log_rich": {"environment": "test"}}, {})
        >>> init_logging(config)  # doctest: +SKIP
    """
    if lib_log_rich.runtime.is_initialised():
        return
    lib_log_rich.config.enable_dotenv()
    lib_log_rich.runtime.init(_build_runtime_config(config))
    lib_log_rich.runtime.attach_std_logging()
    for name in QUIET_LOGGERS:
        logging.getLogger(name).setLevel(logging.WARNING)


__all__ = [
    "QUIET_LOGGERS",
    "LoggingConfigModel",
    "init_logging",
]

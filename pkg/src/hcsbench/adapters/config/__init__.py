"""Configuration adapter - loading, display, overrides and the typed run model.

Contents:
    * :mod:`.loader` - Layered configuration loading with caching
    * :mod:`.display` - Configuration display in human/JSON formats
    * :mod:`.overrides` - CLI ``--set`` override parsing and application
    * :mod:`.run_config` - pydantic models of the ``[run]`` and ``[tolerances]`` tables
"""

from __future__ import annotations

from .display import display_config
from .loader import get_config, get_default_config_path
from .overrides import apply_overrides
from .run_config import RunConfig, ToleranceConfig, load_run_config, load_tolerances, to_suite_settings

__all__ = [
    "RunConfig",
    "ToleranceConfig",
    "apply_overrides",
    "display_config",
    "get_config",
    "get_default_config_path",
    "load_run_config",
    "load_tolerances",
    "to_suite_settings",
]

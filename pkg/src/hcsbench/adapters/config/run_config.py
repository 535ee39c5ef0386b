"""Typed run configuration: the flat ``[run]`` and ``[tolerances]`` tables.

Layered values, ``--set`` overrides and per-command flags are merged into one
mapping and validated once by :class:`RunConfig`. Validation failures leave
this module as :class:`~hcsbench.domain.errors.ConfigurationError` naming the
key, the rejected value and the admissible range.
"""

from __future__ import annotations

from collections.abc import Mapping
from pathlib import Path
from typing import Any, cast

import numpy as np
from lib_layered_config import Config
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from hcsbench.application.verify_suite import SuiteSettings, parse_statements
from hcsbench.application.workbench import LIE_GROUPS
from hcsbench.domain.discrete_group import BUILTIN_GROUPS, DEFAULT_BALL_CAP, GroupPresentation, builtin_presentation
from hcsbench.domain.enums import XiMethod
from hcsbench.domain.errors import ConfigurationError, HcsBenchError
from hcsbench.domain.lie_core import KILLING_SCALE_NOTE, parse_matrix_literal, root_system
from hcsbench.domain.parallel import ParallelContext
from hcsbench.domain.tolerances import DEFAULT_TOLERANCES, Tolerances

_BUILTIN_DIMENSIONS = {"sanov": 2, "sl2z": 2, "sl3z": 3}


class ToleranceConfig(BaseModel):
    """Validated ``[tolerances]`` table; missing keys keep the contractual defaults.

    Example:
        >>> ToleranceConfig(grid=1e-8).to_tolerances().grid
        1e-08
        >>> ToleranceConfig().to_tolerances() == DEFAULT_TOLERANCES
        True
    """

    model_config = ConfigDict(frozen=True, extra="ignore")

    determinant: float = Field(default=DEFAULT_TOLERANCES.determinant, gt=0)
    chamber_sum: float = Field(default=DEFAULT_TOLERANCES.chamber_sum, gt=0)
    orthogonality: float = Field(default=DEFAULT_TOLERANCES.orthogonality, gt=0)
    reconstruction: float = Field(default=DEFAULT_TOLERANCES.reconstruction, gt=0)
    length: float = Field(default=DEFAULT_TOLERANCES.length, gt=0)
    subadditivity: float = Field(default=DEFAULT_TOLERANCES.subadditivity, gt=0)
    grid: float = Field(default=DEFAULT_TOLERANCES.grid, gt=0)
    chain_rule: float = Field(default=DEFAULT_TOLERANCES.chain_rule, gt=0)
    cauchy_schwarz: float = Field(default=DEFAULT_TOLERANCES.cauchy_schwarz, gt=0)
    radial: float = Field(default=DEFAULT_TOLERANCES.radial, gt=0)
    power_iteration: float = Field(default=DEFAULT_TOLERANCES.power_iteration, gt=0)
    shalom: float = Field(default=DEFAULT_TOLERANCES.shalom, ge=0)
    float_key: float = Field(default=DEFAULT_TOLERANCES.float_key, gt=0)
    boundedness: float = Field(default=DEFAULT_TOLERANCES.boundedness, ge=1)
    stability_growth: float = Field(default=DEFAULT_TOLERANCES.stability_growth, ge=1)
    weight_sum: float = Field(default=DEFAULT_TOLERANCES.weight_sum, gt=0)

    def to_tolerances(self) -> Tolerances:
        return Tolerances(**self.model_dump())


class RunConfig(BaseModel):
    """Validated, immutable ``[run]`` table.

    ``group`` names a built-in presentation (``sanov``, ``sl2z``, ``sl3z``) or
    an ambient group (``sl2``, ``sl3``) for commands that need no lattice.
    Non-empty ``generators`` (matrix literals) define a custom presentation
    named ``group``. ``truncation_radius`` is the R used for the largest
    support radius of the main-inequality sweep; smaller supports keep the
    same margin R − support.

    Example:
        >>> config = RunConfig(group="sl3z", d=4.5)
        >>> config.ambient_n, config.presentation().name
        (3, 'sl3z')
        >>> RunConfig(generators="2,1;1,1 1,1;0,1").generators
        ('2,1;1,1', '1,1;0,1')
    """

    model_config = ConfigDict(frozen=True, extra="ignore")

    group: str = "sanov"
    generators: tuple[str, ...] = ()
    n: int | None = Field(default=None, ge=2, le=3)
    d: float = 2.0
    radius: int = Field(default=5, ge=1)
    truncation_radius: int = Field(default=7, ge=1)
    support_radii: tuple[int, ...] = (1, 2, 3)
    convolution_radii: tuple[int, ...] = (2, 3, 4)
    grid_resolution: int = Field(default=4096, ge=4)
    euler_resolution: int = Field(default=12, ge=4)
    pi_resolution: int = Field(default=512, ge=4)
    k_resolution: int = Field(default=32, ge=4)
    chamber_cutoff: float = Field(default=20.0, gt=0)
    seed: int = Field(default=42, ge=0)
    deterministic: bool = False
    output_dir: Path = Path("hcsbench-out")
    workers: int = Field(default=0, ge=0)
    ball_cap: int = Field(default=DEFAULT_BALL_CAP, ge=1)
    corpus_size: int = Field(default=8, ge=1)
    suite: str = "all"
    method: XiMethod | None = None
    radial_samples: int = Field(default=10, ge=1)
    mean_zero_samples: int = Field(default=2, ge=0)
    cs_samples: int = Field(default=100, ge=1)
    stability_sample: int = Field(default=64, ge=1)
    neighborhood_radius: float = Field(default=0.05, gt=0)
    audit_radius: int = Field(default=2, ge=1)

    @field_validator("group", mode="before")
    @classmethod
    def _normalize_group(cls, v: Any) -> Any:
        """Lower-case and strip group names.

        Examples:
            >>> RunConfig._normalize_group(" Sanov ")
            'sanov'
        """
        return v.strip().lower() if isinstance(v, str) else v

    @field_validator("generators", mode="before")
    @classmethod
    def _coerce_generators(cls, v: Any) -> Any:
        """Accept a whitespace-separated string as well as a list of literals.

        Environment variables and ``.env`` files deliver one string.

        Examples:
            >>> RunConfig._coerce_generators("1,2;0,1  1,0;2,1")
            ('1,2;0,1', '1,0;2,1')
            >>> RunConfig._coerce_generators("")
            ()
            >>> RunConfig._coerce_generators(["1,2;0,1"])
            ('1,2;0,1',)
        """
        if v is None:
            return ()
        if isinstance(v, str):
            return tuple(v.split())
        if isinstance(v, list | tuple):
            return tuple(str(item) for item in cast("list[Any]", v))
        return v

    @field_validator("support_radii", "convolution_radii", mode="before")
    @classmethod
    def _coerce_radii(cls, v: Any) -> Any:
        """Accept ``"2,3,4"`` as well as a list of integers.

        Examples:
            >>> RunConfig._coerce_radii("2, 3,4")
            (2, 3, 4)
        """
        if isinstance(v, str):
            return tuple(int(part) for part in v.split(",") if part.strip())
        return v

    @field_validator("support_radii", "convolution_radii", mode="after")
    @classmethod
    def _positive_radii(cls, v: tuple[int, ...]) -> tuple[int, ...]:
        if not v or min(v) < 1:
            raise ValueError("needs at least one radius and every radius must be >= 1")
        return v

    @field_validator("method", mode="before")
    @classmethod
    def _empty_method_to_none(cls, v: Any) -> Any:
        """Empty strings in config files mean "use the default backend"."""
        if isinstance(v, str) and not v.strip():
            return None
        return v

    @field_validator("output_dir", mode="before")
    @classmethod
    def _expand_output_dir(cls, v: Any) -> Any:
        if isinstance(v, str):
            return Path(v).expanduser()
        return v

    @field_validator("suite", mode="after")
    @classmethod
    def _known_statements(cls, v: str) -> str:
        try:
            parse_statements(v)
        except ConfigurationError as exc:
            raise ValueError(str(exc)) from exc
        return v

    @model_validator(mode="after")
    def _validate_group(self) -> RunConfig:
        """Check that the group resolves and agrees with an explicit ``n``."""
        if not self.generators and self.group not in LIE_GROUPS and self.group not in BUILTIN_GROUPS:
            known = ", ".join((*BUILTIN_GROUPS, *LIE_GROUPS))
            raise ValueError(f"unknown group {self.group!r}; expected one of {known} or set run.generators")
        derived = self._derived_n()
        if self.n is not None and self.n != derived:
            raise ValueError(f"n={self.n} contradicts group {self.group!r}, which acts in dimension {derived}")
        if self.truncation_radius <= max(self.support_radii):
            raise ValueError(
                f"truncation_radius={self.truncation_radius} must exceed the largest support radius "
                f"{max(self.support_radii)}"
            )
        return self

    def _derived_n(self) -> int:
        if self.generators:
            try:
                return int(parse_matrix_literal(self.generators[0]).shape[0])
            except HcsBenchError as exc:
                raise ValueError(str(exc)) from exc
        return LIE_GROUPS.get(self.group) or _BUILTIN_DIMENSIONS[self.group]

    @property
    def ambient_n(self) -> int:
        """Dimension n of SL(n,ℝ) the run works in."""
        return self._derived_n()

    @property
    def truncation_extra(self) -> int:
        return self.truncation_radius - max(self.support_radii)

    def presentation(self) -> GroupPresentation:
        """The discrete subgroup; ambient group names have none.

        Raises:
            ConfigurationError: For ``sl2``/``sl3`` without generators, or
                generators that do not form a valid presentation.
        """
        if self.generators:
            try:
                return GroupPresentation.from_literals(self.group, self.generators)
            except HcsBenchError as exc:
                raise ConfigurationError(f"run.generators: {exc}") from exc
        if self.group in LIE_GROUPS:
            raise ConfigurationError(
                f"run.group={self.group!r} names the ambient group; this command needs a discrete group "
                f"({', '.join(BUILTIN_GROUPS)}) or run.generators"
            )
        return builtin_presentation(self.group)

    def require_admissible_d(self) -> None:
        """Raise :class:`ConfigurationError` unless 2d > dim 𝔞 + 2r for this n.

        Example:
            >>> RunConfig(d=1.0).require_admissible_d()
            Traceback (most recent call last):
            ...
            hcsbench.domain.errors.ConfigurationError: run.d=1 is not admissible for SL(2,R): need d > 1.5 (for example d = 2)
        """
        roots = root_system(self.ambient_n)
        if not roots.is_admissible(self.d):
            suggestion = int(np.floor(roots.minimal_d)) + 1
            raise ConfigurationError(
                f"run.d={self.d:g} is not admissible for SL({self.ambient_n},R): "
                f"need d > {roots.minimal_d:g} (for example d = {suggestion})"
            )

    def parallel_context(self) -> ParallelContext:
        if self.workers == 0:
            return ParallelContext.all_cores(deterministic=self.deterministic)
        return ParallelContext(workers=self.workers, deterministic=self.deterministic)

    def describe(self) -> dict[str, Any]:
        """JSON-friendly dump used for the report bundle and its hash."""
        payload = self.model_dump(mode="json")
        payload["n"] = self.ambient_n
        payload["norm_convention"] = KILLING_SCALE_NOTE
        return payload


def _format_validation_error(section: str, exc: ValidationError) -> str:
    lines: list[str] = []
    for error in exc.errors():
        location = ".".join(str(part) for part in error["loc"])
        key = f"{section}.{location}" if location else section
        lines.append(f"{key}: {error['msg']} (got {error.get('input')!r})")
    return "; ".join(lines)


def _section(config: Config | Mapping[str, Any], name: str) -> dict[str, Any]:
    raw: object = config.get(name, default={}) if isinstance(config, Config) else config.get(name, {})
    if not isinstance(raw, Mapping):
        raise ConfigurationError(f"[{name}] must be a table, got {type(raw).__name__}")
    return dict(cast("Mapping[str, Any]", raw))


def load_run_config(config: Config | Mapping[str, Any], **flags: Any) -> RunConfig:
    """Merge ``[run]`` with command-line flags (``None`` means "not given") and validate.

    Example:
        >>> load_run_config({"run": {"group": "sl2z", "d": 3}}, d=None, seed=7).seed
        7
        >>> load_run_config({"run": {"radius": 0}})
        Traceback (most recent call last):
        ...
        hcsbench.domain.errors.ConfigurationError: run.radius: Input should be greater than or equal to 1 (got 0)
    """
    merged = _section(config, "run")
    merged.update({key: value for key, value in flags.items() if value is not None})
    try:
        return RunConfig.model_validate(merged)
    except ValidationError as exc:
        raise ConfigurationError(_format_validation_error("run", exc)) from exc


def load_tolerances(config: Config | Mapping[str, Any]) -> Tolerances:
    """Validate the ``[tolerances]`` table.

    Example:
        >>> load_tolerances({"tolerances": {"radial": 1e-4}}).radial
        0.0001
    """
    try:
        return ToleranceConfig.model_validate(_section(config, "tolerances")).to_tolerances()
    except ValidationError as exc:
        raise ConfigurationError(_format_validation_error("tolerances", exc)) from exc


def to_suite_settings(run: RunConfig, tolerances: Tolerances = DEFAULT_TOLERANCES) -> SuiteSettings:
    """Translate a validated run configuration into suite parameters."""
    run.require_admissible_d()
    return SuiteSettings(
        presentation=run.presentation(),
        d=run.d,
        seed=run.seed,
        corpus_size=run.corpus_size,
        radius=run.radius,
        truncation_extra=run.truncation_extra,
        support_radii=run.support_radii,
        convolution_radii=run.convolution_radii,
        grid_resolution=run.grid_resolution,
        euler_resolution=run.euler_resolution,
        pi_resolution=run.pi_resolution,
        k_resolution=run.k_resolution,
        chamber_cutoff=run.chamber_cutoff,
        radial_samples=run.radial_samples,
        mean_zero_samples=min(run.mean_zero_samples, run.radial_samples),
        cs_samples=run.cs_samples,
        stability_sample=run.stability_sample,
        neighborhood_radius=run.neighborhood_radius,
        audit_radius=run.audit_radius,
        ball_cap=run.ball_cap,
        tolerances=tolerances,
        statements=parse_statements(run.suite),
    )


__all__ = [
    "RunConfig",
    "ToleranceConfig",
    "load_run_config",
    "load_tolerances",
    "to_suite_settings",
]

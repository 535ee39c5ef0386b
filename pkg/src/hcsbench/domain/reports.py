"""Verification reports and the seeded test corpus.

A :class:`VerificationReport` stores residuals next to the tolerances they
are judged against; ``passed`` is recomputed from those two mappings and is
never stored independently.
"""

from __future__ import annotations

import math
from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field
from typing import Any

import numpy as np
import numpy.typing as npt

from .boundary_rep import BoundaryFunction, projective_angle
from .discrete_group import BallIndex, GroupFunction
from .enums import Statement
from .haar_integration import KQuadrature
from .lie_core import FloatArray


def violation(slack: float) -> float:
    """Turn a slack (≥ 0 when the inequality holds) into a residual."""
    return max(0.0, -slack)


def boundedness_ratio(values: Sequence[float]) -> float:
    """max/median of a ratio sequence; the bounded-constant policy compares it with 2.

    Example:
        >>> round(boundedness_ratio([1.0, 1.2, 1.1]), 4)
        1.0909
        >>> boundedness_ratio([])
        1.0
    """
    finite = [v for v in values if math.isfinite(v)]
    if len(finite) != len(values):
        return math.inf
    if not finite:
        return 1.0
    median = float(np.median(finite))
    if median <= 0.0:
        return 1.0 if max(finite) <= 0.0 else math.inf
    return max(finite) / median


@dataclass(frozen=True)
class VerificationReport:
    """Structured record of one statement check.

    Attributes:
        statement: Statement identifier.
        inputs: Parameters, seeds and grid sizes that reproduce the check.
        residuals: Named nonnegative residuals; each one has a tolerance.
        tolerances: Threshold per residual name.
        empirical_constants: Reported constants (ratios, fitted C, ...).
        sequences: Named sequences (ratios over radii) with their metadata
            kept in ``inputs``.

    Example:
        >>> report = VerificationReport(Statement.CS_LEMMA, {}, {"violation": 0.0}, {"violation": 1e-8})
        >>> report.passed
        True
        >>> VerificationReport.from_dict(report.to_dict()).passed
        True
    """

    statement: Statement
    inputs: Mapping[str, Any]
    residuals: Mapping[str, float]
    tolerances: Mapping[str, float]
    empirical_constants: Mapping[str, float] = field(default_factory=dict)
    sequences: Mapping[str, Sequence[float]] = field(default_factory=dict)

    def __post_init__(self) -> None:
        missing = set(self.residuals) - set(self.tolerances)
        if missing:
            raise ValueError(f"residuals without tolerance: {', '.join(sorted(missing))}")

    @property
    def failures(self) -> list[str]:
        return [name for name, value in self.residuals.items() if not value <= self.tolerances[name]]

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_dict(self) -> dict[str, Any]:
        return {
            "statement_id": self.statement.value,
            "inputs": dict(self.inputs),
            "residuals": {k: float(v) for k, v in self.residuals.items()},
            "tolerances": {k: float(v) for k, v in self.tolerances.items()},
            "empirical_constants": {k: float(v) for k, v in self.empirical_constants.items()},
            "sequences": {k: [float(x) for x in v] for k, v in self.sequences.items()},
            "passed": self.passed,
        }

    @classmethod
    def from_dict(cls, payload: Mapping[str, Any]) -> VerificationReport:
        return cls(
            statement=Statement(payload["statement_id"]),
            inputs=dict(payload.get("inputs", {})),
            residuals=dict(payload["residuals"]),
            tolerances=dict(payload["tolerances"]),
            empirical_constants=dict(payload.get("empirical_constants", {})),
            sequences={k: list(v) for k, v in payload.get("sequences", {}).items()},
        )


# ---------------------------------------------------------------------------
# Radial test functions
# ---------------------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class RadialShell:
    """Indicator of inner ≤ |H| < outer."""

    inner: float
    outer: float

    @property
    def support_radius(self) -> float:
        return self.outer

    def __call__(self, h: FloatArray) -> FloatArray:
        radii = np.linalg.norm(np.asarray(h, dtype=np.float64), axis=-1)
        return ((radii >= self.inner) & (radii < self.outer)).astype(np.float64)


@dataclass(frozen=True, slots=True)
class RadialBump:
    """Smooth bump (1 − ((|H| − center)/width)²)² on |H − center| < width."""

    center: float
    width: float
    height: float = 1.0

    @property
    def support_radius(self) -> float:
        return self.center + self.width

    def __call__(self, h: FloatArray) -> FloatArray:
        radii = np.linalg.norm(np.asarray(h, dtype=np.float64), axis=-1)
        u = (radii - self.center) / self.width
        return self.height * np.where(np.abs(u) < 1.0, (1.0 - u**2) ** 2, 0.0)


RadialTestFunction = RadialShell | RadialBump


# ---------------------------------------------------------------------------
# Boundary test functions
# ---------------------------------------------------------------------------


def _trig_formula(coefficients: npt.NDArray[np.complex128], constant: complex, squared: bool) -> Any:
    modes = np.arange(1, coefficients.shape[0] + 1)

    def formula(frames: FloatArray) -> npt.NDArray[np.complex128]:
        theta = projective_angle(frames)
        waves = np.exp(2j * np.outer(theta, modes))
        values = constant + waves @ coefficients
        return np.abs(values) ** 2 + 0j if squared else values

    return formula


def _frame_formula(weights: FloatArray, constant: float, squared: bool) -> Any:
    def formula(frames: FloatArray) -> npt.NDArray[np.complex128]:
        values = constant + np.einsum("ij,nij->n", weights, frames**2 - 1.0 / frames.shape[-1])
        return (values**2 if squared else values) + 0j

    return formula


def random_boundary_function(
    rng: np.random.Generator,
    grid: KQuadrature,
    *,
    mean_zero: bool = False,
    nonnegative: bool = False,
    modes: int = 3,
) -> BoundaryFunction:
    """Smooth closed-form test function on the boundary.

    n = 2 uses trigonometric polynomials in 2θ; n = 3 uses combinations of
    squared frame entries (invariant under the sign group M). ``mean_zero``
    drops the constant term; ``nonnegative`` squares the modulus.
    """
    if grid.n == 2:  # noqa: PLR2004
        coefficients = (rng.standard_normal(modes) + 1j * rng.standard_normal(modes)) / (1.0 + np.arange(modes)) ** 2
        constant = 0.0 if mean_zero else complex(rng.uniform(0.5, 1.5))
        return BoundaryFunction.from_formula(grid, _trig_formula(coefficients, constant, nonnegative and not mean_zero))
    weights = rng.standard_normal((grid.n, grid.n))
    constant = 0.0 if mean_zero else float(rng.uniform(0.5, 1.5))
    return BoundaryFunction.from_formula(grid, _frame_formula(weights, constant, nonnegative and not mean_zero))


# ---------------------------------------------------------------------------
# Test corpus
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class TestCorpus:
    """Seeded random functions on a ball.

    Attributes:
        seed: Generator seed; the corpus is a pure function of it and the ball.
        functions: Signed functions, values uniform on [−1, 1] (or the unit
            disc when complex).
        nonnegative: Pointwise absolute values of ``functions``.
        radial_functions: Radial test functions on the chamber.
    """

    __test__ = False

    seed: int
    functions: tuple[GroupFunction, ...]
    nonnegative: tuple[GroupFunction, ...]
    radial_functions: tuple[RadialTestFunction, ...]

    def __len__(self) -> int:
        return len(self.functions)


def build_corpus(
    ball: BallIndex,
    size: int,
    seed: int,
    *,
    support_radius: int | None = None,
    complex_values: bool = False,
    density: float = 0.5,
) -> TestCorpus:
    """Even entries use the full ball of ``support_radius``; odd entries a random subset at ``density``.

    Example:
        >>> from hcsbench.domain.discrete_group import builtin_presentation, generate_ball
        >>> ball = generate_ball(builtin_presentation("sanov"), 2)
        >>> corpus = build_corpus(ball, 4, seed=7, support_radius=1)
        >>> len(corpus), all(f.is_nonnegative for f in corpus.nonnegative)
        (4, True)
        >>> max(f.support_radius for f in corpus.functions) <= 1
        True
    """
    rng = np.random.default_rng(seed)
    radius = ball.radius if support_radius is None else min(support_radius, ball.radius)
    end = ball.layer_end(radius)
    functions: list[GroupFunction] = []
    for i in range(size):
        if complex_values:
            magnitude = np.sqrt(rng.uniform(0.0, 1.0, end))
            values = magnitude * np.exp(2j * np.pi * rng.uniform(0.0, 1.0, end))
        else:
            values = rng.uniform(-1.0, 1.0, end) + 0j
        if i % 2 == 1:
            mask = rng.uniform(0.0, 1.0, end) < density
            mask[rng.integers(0, end)] = True
            values = np.where(mask, values, 0.0)
        full = np.zeros(len(ball), dtype=np.complex128)
        full[:end] = values
        functions.append(GroupFunction(ball, full))
    radial: list[RadialTestFunction] = []
    for _ in range(max(1, size // 2)):
        center = float(rng.uniform(0.5, 3.0))
        radial.append(RadialBump(center=center, width=float(rng.uniform(0.3, 1.0)), height=float(rng.uniform(0.5, 2.0))))
    return TestCorpus(
        seed=seed,
        functions=tuple(functions),
        nonnegative=tuple(f.absolute() for f in functions),
        radial_functions=tuple(radial),
    )


__all__ = [
    "RadialBump",
    "RadialShell",
    "RadialTestFunction",
    "TestCorpus",
    "VerificationReport",
    "boundedness_ratio",
    "build_corpus",
    "random_boundary_function",
    "violation",
]

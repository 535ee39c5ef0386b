"""Use cases behind the inspection commands (cartan, xi, cd, ball, norms, plot).

Each function takes plain parameters, drives the domain modules and returns a
small frozen summary with a ``to_dict`` for the output adapters.
"""

from __future__ import annotations

import logging
from collections.abc import Sequence
from dataclasses import dataclass
from typing import Any

import numpy as np
import numpy.typing as npt

from ..domain.boundary_rep import HorocyclicXi, XiEvaluatorImpl, default_xi_evaluator, make_xi_evaluator, xi_decay_profile
from ..domain.discrete_group import (
    DEFAULT_BALL_CAP,
    BallIndex,
    GroupFunction,
    GroupPresentation,
    ball_table_rows,
    generate_ball,
    schwartz_norm,
    sobolev_norm,
    sobolev_schwartz_gap,
)
from ..domain.enums import XiMethod
from ..domain.errors import ConfigurationError, UnsupportedDimensionError
from ..domain.haar_integration import CdConstant, build_boundary_quadrature, build_chamber_quadrature, cd_constant
from ..domain.lie_core import GroupElement, cartan_decompose, format_matrix_literal, length, root_system
from ..domain.parallel import SEQUENTIAL, ParallelContext
from ..domain.reports import build_corpus

logger = logging.getLogger(__name__)

#: Ambient Lie groups addressable by name next to the discrete presentations.
LIE_GROUPS: dict[str, int] = {"sl2": 2, "sl3": 3}


def xi_evaluator_for(
    n: int,
    method: XiMethod | str | None = None,
    *,
    grid_resolution: int = 4096,
    euler_resolution: int = 12,
) -> XiEvaluatorImpl:
    """Ξ evaluator for SL(n,ℝ); ``None`` picks the default backend.

    Example:
        >>> type(xi_evaluator_for(2)).__name__
        'HorocyclicXi'
        >>> xi_evaluator_for(2, "iwasawa", grid_resolution=64).method.value
        'iwasawa'
    """
    resolution = grid_resolution if n == 2 else euler_resolution  # noqa: PLR2004
    if method is None:
        if n == 2:  # noqa: PLR2004
            return HorocyclicXi()
        return default_xi_evaluator(n, build_boundary_quadrature(n, resolution))
    chosen = XiMethod(method)
    if chosen is XiMethod.HOROCYCLIC:
        return make_xi_evaluator(chosen)
    return make_xi_evaluator(chosen, build_boundary_quadrature(n, resolution))


def chamber_element(n: int, t: float) -> GroupElement:
    """exp(H) with H along ρ and largest root value α(H) = t.

    Example:
        >>> chamber_element(2, 2.0).entries.diagonal().round(6).tolist()
        [2.718282, 0.367879]
    """
    rho = root_system(n).rho
    h = t * rho / float(rho[0] - rho[-1])
    return GroupElement(np.diag(np.exp(h)))


# ---------------------------------------------------------------------------
# cartan
# ---------------------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class CartanSummary:
    matrix: str
    k1: list[list[float]]
    h: list[float]
    k2: list[list[float]]
    length: float
    reconstruction_error: float

    def to_dict(self) -> dict[str, Any]:
        return {
            "matrix": self.matrix,
            "k1": self.k1,
            "h": self.h,
            "k2": self.k2,
            "length": self.length,
            "reconstruction_error": self.reconstruction_error,
        }


def cartan_summary(literal: str) -> CartanSummary:
    """Decompose a matrix literal into k1·exp(h)·k2.

    Example:
        >>> summary = cartan_summary("2,1;1,1")
        >>> [round(v, 4) for v in summary.h]
        [0.9624, -0.9624]
        >>> summary.reconstruction_error < 1e-12
        True
    """
    g = GroupElement.from_literal(literal)
    triple = cartan_decompose(g)
    error = float(np.linalg.norm(triple.reconstruct() - g.entries) / np.linalg.norm(g.entries))
    return CartanSummary(
        matrix=format_matrix_literal(g.entries),
        k1=triple.k1.entries.tolist(),
        h=triple.h.values.tolist(),
        k2=triple.k2.entries.tolist(),
        length=length(g),
        reconstruction_error=error,
    )


# ---------------------------------------------------------------------------
# xi
# ---------------------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class XiComparison:
    """Ξ(g) by every applicable backend; ``delta`` is |boundary − iwasawa|."""

    n: int
    matrix: str
    t: float | None
    values: dict[str, float]
    delta: float

    def to_dict(self) -> dict[str, Any]:
        return {"n": self.n, "matrix": self.matrix, "t": self.t, "values": dict(self.values), "delta": self.delta}


def xi_comparison(
    n: int,
    *,
    t: float | None = None,
    matrix: str | None = None,
    grid_resolution: int = 4096,
    euler_resolution: int = 12,
) -> XiComparison:
    """Evaluate Ξ at ``matrix`` (or at the chamber element of ``t``) by both grid backends.

    Example:
        >>> result = xi_comparison(2, t=0.0, grid_resolution=256)
        >>> {name: round(v, 10) for name, v in result.values.items()}
        {'boundary': 1.0, 'iwasawa': 1.0, 'horocyclic': 1.0}
    """
    if matrix is not None:
        g = GroupElement.from_literal(matrix)
        if g.dim != n:
            raise ConfigurationError(f"--matrix is {g.dim}x{g.dim} but the group acts in dimension {n}")
    elif t is not None:
        g = chamber_element(n, t)
    else:
        raise ConfigurationError("xi needs either --t or --matrix")
    values: dict[str, float] = {}
    methods = [XiMethod.BOUNDARY, XiMethod.IWASAWA] + ([XiMethod.HOROCYCLIC] if n == 2 else [])  # noqa: PLR2004
    for method in methods:
        evaluator = xi_evaluator_for(n, method, grid_resolution=grid_resolution, euler_resolution=euler_resolution)
        values[method.value] = float(evaluator(g.entries)[0])
    delta = abs(values[XiMethod.BOUNDARY.value] - values[XiMethod.IWASAWA.value])
    logger.debug("xi compared", extra={"n": n, "values": values, "delta": delta})
    return XiComparison(n=n, matrix=format_matrix_literal(g.entries), t=t, values=values, delta=delta)


# ---------------------------------------------------------------------------
# cd
# ---------------------------------------------------------------------------


def cd_summary(
    n: int,
    d: float,
    cutoffs: Sequence[float],
    *,
    method: XiMethod | str | None = None,
    grid_resolution: int = 4096,
    euler_resolution: int = 12,
    ctx: ParallelContext = SEQUENTIAL,
) -> list[CdConstant]:
    """𝒞_d with its tail bound at every cutoff, in the order given."""
    evaluator = xi_evaluator_for(n, method, grid_resolution=grid_resolution, euler_resolution=euler_resolution)
    roots = root_system(n)

    def at_cutoff(cutoff: float) -> CdConstant:
        return cd_constant(d, build_chamber_quadrature(n, cutoff), evaluator, roots)

    return ctx.map_ordered(at_cutoff, list(cutoffs))


def cd_to_dict(cd: CdConstant) -> dict[str, float]:
    return {
        "d": cd.d,
        "cutoff": cd.cutoff,
        "value": cd.value,
        "tail_bound": cd.tail_bound,
        "decay_constant": cd.decay_constant,
        "last_shell": cd.last_shell,
    }


# ---------------------------------------------------------------------------
# ball and norms
# ---------------------------------------------------------------------------


def ball_summary(ball: BallIndex) -> dict[str, Any]:
    return {
        "group": ball.presentation.describe(),
        "radius": ball.radius,
        "size": len(ball),
        "layers": ball.layer_counts(),
        "max_length": float(ball.lengths.max()),
    }


@dataclass(frozen=True, slots=True)
class NormsTable:
    """Per-element L, Ξ and norm weights with the norms of one seeded function.

    Attributes:
        rows: One row per ball element.
        d: Decay exponent of both norms.
        sobolev: ‖f‖_{H^d_L} of the seeded function.
        schwartz: ‖f‖_{S^d_L} of the seeded function.
        gap: RHS − LHS of the Sobolev/Schwartz comparison at d′ = d.
    """

    rows: list[dict[str, Any]]
    d: float
    sobolev: float
    schwartz: float
    gap: float

    def summary(self) -> dict[str, float]:
        return {"d": self.d, "sobolev": self.sobolev, "schwartz": self.schwartz, "gap": self.gap}


def norms_table(
    presentation: GroupPresentation,
    radius: int,
    d: float,
    seed: int,
    xi: XiEvaluatorImpl,
    *,
    cap: int = DEFAULT_BALL_CAP,
) -> NormsTable:
    """Enumerate a ball and tabulate the Sobolev and Schwartz weights of every element.

    Example:
        >>> from hcsbench.domain.discrete_group import builtin_presentation
        >>> table = norms_table(builtin_presentation("sanov"), 1, 2.0, 7, HorocyclicXi())
        >>> len(table.rows), table.gap >= 0
        (5, True)
    """
    ball = generate_ball(presentation, radius, cap=cap)
    f: GroupFunction = build_corpus(ball, 1, seed).functions[0]
    rows = ball_table_rows(ball, xi, f)
    for row in rows:
        weight = (1.0 + row["length"]) ** d
        row["sobolev_weight"] = weight
        row["schwartz_weight"] = weight / row["xi"]
    return NormsTable(
        rows=rows,
        d=d,
        sobolev=sobolev_norm(f, d),
        schwartz=schwartz_norm(f, d, xi),
        gap=sobolev_schwartz_gap(f, d, d, xi),
    )


# ---------------------------------------------------------------------------
# plot
# ---------------------------------------------------------------------------


def decay_profile(
    cutoff: float, xi: XiEvaluatorImpl, samples: int = 401
) -> tuple[npt.NDArray[np.float64], npt.NDArray[np.float64], npt.NDArray[np.float64]]:
    """t on [0, cutoff] with Ξ(a_t) and the envelope e^{−t/2}(1 + t/√2) (SL(2,ℝ))."""
    if xi.n != 2:  # noqa: PLR2004
        raise UnsupportedDimensionError(xi.n, (2,))
    t = np.linspace(0.0, cutoff, samples)
    values, envelope = xi_decay_profile(xi, t)
    return t, values, envelope


__all__ = [
    "LIE_GROUPS",
    "CartanSummary",
    "NormsTable",
    "XiComparison",
    "ball_summary",
    "cartan_summary",
    "cd_summary",
    "cd_to_dict",
    "chamber_element",
    "decay_profile",
    "norms_table",
    "xi_comparison",
    "xi_evaluator_for",
]

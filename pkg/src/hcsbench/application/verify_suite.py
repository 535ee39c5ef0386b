"""Verification use cases, one per checkable statement.

Every ``check_*`` function takes domain objects, computes both sides of one
inequality or identity, and returns a :class:`VerificationReport`. Verdicts
come from residuals compared against tolerances recorded next to them;
empirical constants and ratio sequences are reported without a verdict
unless the bounded-ratio policy applies.

:func:`run_suite` wires the checks to a :class:`SuiteSettings` value and
runs the selected statements through a :class:`ParallelContext`.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Callable, Mapping, Sequence
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any

import numpy as np
from scipy.linalg import expm

from hcsbench.domain.boundary_rep import (
    BoundaryFunction,
    GridXi,
    XiEvaluatorImpl,
    apply_pi,
    coefficients_with_one,
    default_xi_evaluator,
    pairing,
    weighted_half_density,
)
from hcsbench.domain.discrete_group import (
    DEFAULT_BALL_CAP,
    BallIndex,
    GroupFunction,
    GroupPresentation,
    generate_ball,
    phi_weights,
    product_table,
    schwartz_norm,
    summability_from_ball,
)
from hcsbench.domain.discrete_group import convolve as convolve_functions
from hcsbench.domain.enums import Statement, XiMethod
from hcsbench.domain.errors import (
    ConfigurationError,
    CutoffTooSmallError,
    GridMismatchError,
    NegativeMassError,
    OverlapDetectedError,
    TargetTooSmallError,
)
from hcsbench.domain.haar_integration import (
    CdConstant,
    ChamberQuadrature,
    KQuadrature,
    RadialFunction,
    build_boundary_quadrature,
    build_chamber_quadrature,
    build_k_quadrature,
    cartan_density_batch,
    cd_constant,
    check_admissible,
    sobolev_norm_on_group,
)
from hcsbench.domain.lie_core import ChamberVector, GroupElement, length_batch, random_group_element, root_system
from hcsbench.domain.operator_norms import check_nonnegative, lambda_norm_sequence, shalom_compare
from hcsbench.domain.parallel import SEQUENTIAL, ParallelContext
from hcsbench.domain.reports import (
    RadialBump,
    RadialShell,
    RadialTestFunction,
    TestCorpus,
    VerificationReport,
    boundedness_ratio,
    build_corpus,
    random_boundary_function,
    violation,
)
from hcsbench.domain.tolerances import DEFAULT_TOLERANCES, Tolerances

logger = logging.getLogger(__name__)

#: First radius whose summability increment must shrink in the convergent regime.
SUMMABILITY_START = 4
#: Euler resolution of the K grid used for K-averages on SL(3,ℝ); exact for frame polynomials up to degree 5.
EULER_K_RESOLUTION = 6


# ---------------------------------------------------------------------------
# Shared helpers
# ---------------------------------------------------------------------------


def _require_nonnegative(xi: BoundaryFunction) -> None:
    if xi.is_nonnegative:
        return
    bad = np.flatnonzero((xi.samples.real < 0) | (xi.samples.imag != 0))
    index = int(bad[0])
    raise NegativeMassError(index=index, value=float(xi.samples[index].real))


def _support_radius(fr: RadialFunction) -> float | None:
    value = getattr(fr, "support_radius", None)
    return None if value is None else float(value)


def _merge_reports(statement: Statement, reports: Sequence[VerificationReport], inputs: Mapping[str, Any]) -> VerificationReport:
    """Worst case over several instances of one statement."""
    residuals: dict[str, float] = {}
    tolerances: dict[str, float] = {}
    constants: dict[str, float] = {}
    for report in reports:
        for name, value in report.residuals.items():
            if name not in residuals or not value <= residuals[name]:
                residuals[name] = value
                tolerances[name] = report.tolerances[name]
        for name, value in report.empirical_constants.items():
            constants[name] = max(constants.get(name, -math.inf), value)
    sequences = {name: [report.residuals[name] for report in reports] for name in residuals}
    return VerificationReport(statement, {**inputs, "instances": len(reports)}, residuals, tolerances, constants, sequences)


# ---------------------------------------------------------------------------
# Radial pairing identity and its Sobolev bound
# ---------------------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class RadialSides:
    """Both sides of the radial pairing identity on one chamber quadrature.

    Attributes:
        lhs: Σ w·J·f·⟨π(e^H)ξ^K, η^K⟩.
        rhs: ⟨ξ,1⟩⟨1,η⟩·Σ w·J·f·Ξ.
        k_defect: Bound on the LHS drift caused by the K-average quadrature,
            from the distance of ξ^K and η^K to constants.
        xi_mean: ⟨ξ, 1⟩.
        eta_mean: ⟨η, 1⟩.
    """

    lhs: complex
    rhs: complex
    k_defect: float
    xi_mean: complex
    eta_mean: complex


def _k_averaged(xi: BoundaryFunction, kgrid: KQuadrature) -> BoundaryFunction:
    averaged = xi.k_average(kgrid)
    if averaged.grid.kind == "projective":
        return BoundaryFunction.from_samples(averaged.grid, averaged.samples)
    return averaged


def radial_sides(
    fr: RadialFunction,
    xi: BoundaryFunction,
    eta: BoundaryFunction,
    quad: ChamberQuadrature,
    kgrid: KQuadrature,
    xi_eval: XiEvaluatorImpl,
) -> RadialSides:
    """Evaluate the integral of a radial f against a matrix coefficient in Cartan coordinates."""
    support = _support_radius(fr)
    if support is not None and support > quad.cutoff:
        raise CutoffTooSmallError(f"radial function supported up to {support} beyond the chamber cutoff {quad.cutoff}")
    if not xi.grid.compatible(eta.grid):
        raise GridMismatchError("ξ and η live on different boundary grids")
    roots = root_system(quad.n)
    nodes = np.asarray(quad.nodes)
    weights = quad.weights * cartan_density_batch(nodes, roots) * np.asarray(fr(nodes), dtype=np.complex128)
    active = np.flatnonzero(weights != 0)

    xi_k = _k_averaged(xi, kgrid)
    eta_k = _k_averaged(eta, kgrid)
    coefficients = np.array([pairing(apply_pi(ChamberVector(nodes[i]).exp(), xi_k), eta_k) for i in active], dtype=np.complex128)
    lhs = complex(np.sum(weights[active] * coefficients)) if active.size else 0j

    xi_mean = xi.mean()
    eta_mean = eta.mean()
    xi_values = np.asarray(xi_eval.at_chamber(nodes[active]), dtype=np.float64) if active.size else np.zeros(0)
    rhs = xi_mean * np.conj(eta_mean) * complex(np.sum(weights[active] * xi_values))

    grid_xi = GridXi(xi.grid, XiMethod.BOUNDARY)
    grid_values = np.asarray(grid_xi.at_chamber(nodes[active])) if active.size else np.zeros(0)
    # off-grid margin
    drift_xi = 2.0 * float(np.max(np.abs(xi_k.samples - xi_mean)))
    drift_eta = 2.0 * float(np.max(np.abs(eta_k.samples - eta_mean)))
    k_defect = (drift_xi * float(np.max(np.abs(eta_k.samples))) + abs(xi_mean) * drift_eta) * float(
        np.sum(np.abs(weights[active]) * grid_values)
    )
    return RadialSides(lhs=lhs, rhs=complex(rhs), k_defect=k_defect, xi_mean=xi_mean, eta_mean=eta_mean)


def _radial_inputs(xi: BoundaryFunction, quad: ChamberQuadrature, kgrid: KQuadrature) -> dict[str, Any]:
    return {
        "n": quad.n,
        "grid_resolution": xi.grid.resolution,
        "grid_nodes": len(xi.grid),
        "k_nodes": len(kgrid),
        "chamber_nodes": len(quad),
        "cutoff": quad.cutoff,
    }


def check_radial_identity(
    fr: RadialFunction,
    xi: BoundaryFunction,
    eta: BoundaryFunction,
    quad: ChamberQuadrature,
    grid: KQuadrature,
    *,
    kgrid: KQuadrature | None = None,
    xi_eval: XiEvaluatorImpl | None = None,
    tolerances: Tolerances = DEFAULT_TOLERANCES,
) -> VerificationReport:
    """∫ f⟨π(g)ξ,η⟩ dg = ⟨ξ,1⟩⟨1,η⟩⟨f,Ξ⟩ for a radial f.

    The K-average defect is reported next to the residual, not added to
    the tolerance.

    Example:
        >>> from hcsbench.domain.reports import RadialShell
        >>> grid = build_boundary_quadrature(2, 256)
        >>> quad = build_chamber_quadrature(2, 6.0, shells=8, nodes_per_shell=4)
        >>> one = BoundaryFunction.ones(grid)
        >>> check_radial_identity(RadialShell(0.5, 2.0), one, one, quad, grid).passed
        True
    """
    if not grid.compatible(xi.grid):
        raise GridMismatchError("ξ is not sampled on the requested boundary grid")
    kgrid = kgrid or _default_kgrid(grid.n)
    xi_eval = xi_eval or default_xi_evaluator(grid.n, grid)
    sides = radial_sides(fr, xi, eta, quad, kgrid, xi_eval)
    residual = abs(sides.lhs - sides.rhs)
    return VerificationReport(
        statement=Statement.RADIAL_IDENTITY,
        inputs=_radial_inputs(xi, quad, kgrid),
        residuals={"identity": residual},
        tolerances={"identity": tolerances.radial},
        empirical_constants={
            "lhs_abs": abs(sides.lhs),
            "rhs_abs": abs(sides.rhs),
            "k_defect": sides.k_defect,
            "xi_mean_abs": abs(sides.xi_mean),
        },
    )


def check_radial_sobolev(
    fr: RadialFunction,
    xi: BoundaryFunction,
    eta: BoundaryFunction,
    d: float,
    quad: ChamberQuadrature,
    *,
    kgrid: KQuadrature | None = None,
    xi_eval: XiEvaluatorImpl | None = None,
    tolerances: Tolerances = DEFAULT_TOLERANCES,
) -> VerificationReport:
    """|∫ f⟨π(g)ξ,η⟩ dg| ≤ 𝒞_d^{1/2}‖f‖_{H^d(G)}‖ξ‖₁‖η‖₁.

    𝒞_d is taken on ``quad`` itself, where the bound is a Cauchy–Schwarz
    inequality between quadrature sums.
    """
    roots = root_system(quad.n)
    check_admissible(d, roots)
    kgrid = kgrid or _default_kgrid(quad.n)
    xi_eval = xi_eval or default_xi_evaluator(quad.n, xi.grid)
    sides = radial_sides(fr, xi, eta, quad, kgrid, xi_eval)
    cd = cd_constant(d, quad, xi_eval, roots)
    sobolev = sobolev_norm_on_group(fr, d, quad, roots)
    bound = math.sqrt(cd.value) * sobolev * xi.norm1 * eta.norm1
    slack = bound - abs(sides.lhs)
    return VerificationReport(
        statement=Statement.RADIAL_SOBOLEV,
        inputs={**_radial_inputs(xi, quad, kgrid), "d": d},
        residuals={"bound": violation(slack)},
        tolerances={"bound": tolerances.radial},
        empirical_constants={
            "lhs_abs": abs(sides.lhs),
            "bound": bound,
            "cd": cd.value,
            "sobolev_norm": sobolev,
            "k_defect": sides.k_defect,
        },
    )


def _default_kgrid(n: int) -> KQuadrature:
    return build_k_quadrature(n, 32 if n == 2 else EULER_K_RESOLUTION)  # noqa: PLR2004


# ---------------------------------------------------------------------------
# Cauchy–Schwarz lemma
# ---------------------------------------------------------------------------


def check_cs_lemma(
    g: GroupElement,
    xi: BoundaryFunction,
    eta: BoundaryFunction,
    *,
    tolerances: Tolerances = DEFAULT_TOLERANCES,
) -> VerificationReport:
    """|⟨π(g)ξ,η⟩| ≤ ⟨π(g)1,|η|²⟩^{1/2}·⟨π(g⁻¹)1,|ξ|²⟩^{1/2}.

    On a grid the second factor equals ⟨π(g)|ξ|²,1⟩ only up to quadrature
    error; that gap enters the tolerance.

    Example:
        >>> grid = build_boundary_quadrature(2, 128)
        >>> one = BoundaryFunction.ones(grid)
        >>> g = GroupElement(np.diag([2.0, 0.5]))
        >>> check_cs_lemma(g, one, one).passed
        True
    """
    if not xi.grid.compatible(eta.grid):
        raise GridMismatchError("ξ and η live on different boundary grids")
    one = BoundaryFunction.ones(xi.grid)
    xi_squared = xi.abs_squared()
    lhs = abs(pairing(apply_pi(g, xi), eta))
    first = pairing(apply_pi(g, one), eta.abs_squared()).real
    second = pairing(apply_pi(g.inverse(), one), xi_squared).real
    moved = pairing(apply_pi(g, xi_squared), one).real
    rhs = math.sqrt(max(first, 0.0)) * math.sqrt(max(second, 0.0))
    defect = math.sqrt(max(first, 0.0)) * abs(math.sqrt(max(moved, 0.0)) - math.sqrt(max(second, 0.0)))
    return VerificationReport(
        statement=Statement.CS_LEMMA,
        inputs={"n": g.dim, "grid_resolution": xi.grid.resolution},
        residuals={"violation": violation(rhs - lhs)},
        tolerances={"violation": tolerances.cauchy_schwarz * max(1.0, rhs) + defect},
        empirical_constants={"lhs": lhs, "rhs": rhs, "slack": rhs - lhs, "quadrature_defect": defect},
    )


# ---------------------------------------------------------------------------
# Stability lemma
# ---------------------------------------------------------------------------


def sample_neighborhood(rng: np.random.Generator, n: int, radius: float, size: int) -> np.ndarray:
    """exp(X) for traceless X with ‖X‖₂ ≤ radius, radius scaled uniformly."""
    if radius == 0.0:
        return np.broadcast_to(np.eye(n), (size, n, n)).copy()
    x = rng.standard_normal((size, n, n))
    x -= np.trace(x, axis1=1, axis2=2)[:, np.newaxis, np.newaxis] * np.eye(n) / n
    norms = np.linalg.norm(x, ord=2, axis=(1, 2))
    x *= (radius * rng.uniform(0.0, 1.0, size) / norms)[:, np.newaxis, np.newaxis]
    return np.asarray(expm(x))


def overlap_audit(ball: BallIndex, radius: float) -> tuple[float, float]:
    """Minimal ‖γ⁻¹γ′ − I‖₂ over distinct ball elements and the separation it must exceed.

    γU ∩ γ′U ≠ ∅ forces γ⁻¹γ′ ∈ UU⁻¹ ⊂ {‖x − I‖₂ ≤ e^{2r} − 1}.
    """
    required = math.expm1(2.0 * radius)
    if len(ball) < 2:  # noqa: PLR2004
        return math.inf, required
    stack = ball.stack
    inverses = np.linalg.inv(stack)
    n = ball.n
    distance = math.inf
    for i in range(len(ball)):
        products = inverses[i] @ stack
        gaps = np.linalg.norm(products - np.eye(n), ord=2, axis=(1, 2))
        gaps[i] = math.inf
        distance = min(distance, float(gaps.min()))
    return distance, required


def check_stability(
    d: float,
    p: GroupPresentation,
    xi: BoundaryFunction,
    neighborhood_radius: float,
    sample: int,
    *,
    audit_radius: int = 2,
    seed: int = 0,
    cap: int = DEFAULT_BALL_CAP,
    tolerances: Tolerances = DEFAULT_TOLERANCES,
) -> VerificationReport:
    """Stability of g ↦ ⟨π(g)1,ξ⟩/(1+L(g))^d relative to Γ.

    The empirical constant max value(γ)/value(γu) is estimated twice, on
    ``sample`` and on ``2·sample`` draws (the first draws shared), and the
    check passes when the larger estimate stays within the growth tolerance.

    Example:
        >>> from hcsbench.domain.discrete_group import builtin_presentation
        >>> grid = build_boundary_quadrature(2, 128)
        >>> report = check_stability(0.0, builtin_presentation("sanov"), BoundaryFunction.ones(grid), 0.0, 8)
        >>> round(report.empirical_constants["c_emp"], 12)
        1.0
    """
    if neighborhood_radius < 0:
        raise ConfigurationError(f"neighborhood radius must be >= 0, got {neighborhood_radius}")
    if sample < 1:
        raise ConfigurationError(f"stability sample must be >= 1, got {sample}")
    _require_nonnegative(xi)
    ball = generate_ball(p, audit_radius, cap=cap)
    distance, required = overlap_audit(ball, neighborhood_radius)
    if not distance > required:
        raise OverlapDetectedError(min_distance=distance, required=required)

    rng = np.random.default_rng(seed)
    total = 2 * sample
    picks = rng.integers(0, len(ball), total)
    units = sample_neighborhood(rng, p.n, neighborhood_radius, total)
    moved = ball.stack[picks] @ units

    def value(stack: np.ndarray) -> np.ndarray:
        coefficients = np.asarray(coefficients_with_one(stack, xi)).real
        return coefficients * (1.0 + length_batch(stack)) ** (-d)

    base = value(ball.stack)[picks]
    ratios = base / value(moved)
    c_small = float(np.max(ratios[:sample]))
    c_large = float(np.max(ratios))
    growth = c_large / c_small if math.isfinite(c_large) and c_small > 0 else math.inf
    triangle = float(np.max(ratios / (1.0 + length_batch(units)) ** d))
    report = VerificationReport(
        statement=Statement.STABILITY,
        inputs={
            "group": p.name,
            "d": d,
            "neighborhood_radius": neighborhood_radius,
            "sample": sample,
            "audit_radius": audit_radius,
            "seed": seed,
            "grid_resolution": xi.grid.resolution,
        },
        residuals={"growth": growth},
        tolerances={"growth": tolerances.stability_growth},
        empirical_constants={
            "c_emp": c_large,
            "c_emp_half_sample": c_small,
            "triangle_factor": triangle,
            "min_distance": distance,
            "required_distance": required,
        },
    )
    logger.debug("stability sampled", extra={"c_emp": c_large, "growth": growth})
    return report


# ---------------------------------------------------------------------------
# Discretization proposition
# ---------------------------------------------------------------------------


def discretization_constant(ball: BallIndex, d: float, grid: KQuadrature, xi_eval: XiEvaluatorImpl) -> float:
    """sup over densities ζ of Σ_γ φ_{2d}(γ)⟨π(γ)1,ζ⟩, i.e. max_b Σ_γ φ_{2d}(γ)c(γ,b)^{1/2}."""
    weights = phi_weights(ball, 2.0 * d, xi_eval)
    return float(np.max(weighted_half_density(ball.stack, weights, grid)))


def check_discretization(
    d: float,
    p: GroupPresentation,
    xi: BoundaryFunction,
    radius: int,
    *,
    cd: CdConstant | None = None,
    quad: ChamberQuadrature | None = None,
    xi_eval: XiEvaluatorImpl | None = None,
    cap: int = DEFAULT_BALL_CAP,
    tolerances: Tolerances = DEFAULT_TOLERANCES,
) -> VerificationReport:
    """Σ_{γ ∈ B_R} φ_{2d}(γ)⟨π(γ)1,ξ⟩ against 𝒞_d·‖ξ‖₁ over R = 1..radius.

    Passing means the ratio sequence obeys the bounded-ratio policy. The
    pointwise constant (the same sum maximized over point masses, divided
    by 𝒞_d) bounds the ratio for every density and feeds the main chain.
    """
    roots = root_system(p.n)
    check_admissible(d, roots)
    _require_nonnegative(xi)
    if radius < 1:
        raise ConfigurationError(f"discretization radius must be >= 1, got {radius}")
    xi_eval = xi_eval or default_xi_evaluator(p.n, xi.grid)
    if cd is None:
        cd = cd_constant(d, quad or build_chamber_quadrature(p.n, 20.0), xi_eval, roots)
    ball = generate_ball(p, radius, cap=cap)
    weights = phi_weights(ball, 2.0 * d, xi_eval)
    coefficients = np.asarray(coefficients_with_one(ball.stack, xi)).real
    per_layer = np.bincount(ball.word_length, weights=weights * coefficients, minlength=radius + 1)
    partial = np.cumsum(per_layer)
    reference = cd.value * xi.norm1
    ratios = [float(value / reference) for value in partial[1:]]
    pointwise = float(np.max(weighted_half_density(ball.stack, weights, xi.grid))) / cd.value
    return VerificationReport(
        statement=Statement.DISCRETIZATION,
        inputs={
            "group": p.name,
            "d": d,
            "radius": radius,
            "ball_size": len(ball),
            "grid_resolution": xi.grid.resolution,
            "cutoff": cd.cutoff,
        },
        residuals={"boundedness": boundedness_ratio(ratios)},
        tolerances={"boundedness": tolerances.boundedness},
        empirical_constants={
            "cd": cd.value,
            "cd_tail_bound": cd.tail_bound,
            "c_emp": max(ratios),
            "pointwise_constant": pointwise,
            "lhs": float(partial[-1]),
        },
        sequences={"ratio": ratios, "partial_sum": [float(v) for v in partial[1:]]},
    )


# ---------------------------------------------------------------------------
# Theorem, convolution item
# ---------------------------------------------------------------------------


def _target_for(corpus: TestCorpus, p: GroupPresentation, radius: int, cap: int) -> BallIndex:
    if not corpus.functions:
        raise ConfigurationError("the convolution check needs a non-empty corpus")
    ball = corpus.functions[0].ball
    if ball.presentation.fingerprint != p.fingerprint:
        raise ConfigurationError(f"corpus built on {ball.presentation.name!r}, check requested on {p.name!r}")
    support = max(f.support_radius for f in corpus.functions)
    if support > radius:
        raise TargetTooSmallError(needed=support, available=radius)
    needed = 2 * radius
    return ball if ball.radius >= needed else generate_ball(p, needed, cap=cap)


def split_pieces(f1: GroupFunction, f2: GroupFunction, target: BallIndex, d: float, xi_eval: XiEvaluatorImpl) -> tuple[float, float]:
    """Relative violations of the bounds on the near (L(γ) ≤ L(g)/2) and far pieces of |f₁|∗|f₂|.

    With γ·h = g: the near piece is at most
    ‖f₁‖‖f₂‖·2^{2d}(1+L(g))^{−2d}·Σ φ_{2d}(γ)Ξ(h), the far piece the same
    with the roles of γ and h swapped, all norms in S^{2d}.
    """
    table = product_table(f1, f2, target)
    if table.left.size == 0:
        return 0.0, 0.0
    s1 = schwartz_norm(f1, 2.0 * d, xi_eval)
    s2 = schwartz_norm(f2, 2.0 * d, xi_eval)
    magnitudes = np.abs(f1.as_complex()[table.left]) * np.abs(f2.as_complex()[table.right])
    length_g = target.lengths[table.product]
    length_left = f1.ball.lengths[table.left]
    length_right = f2.ball.lengths[table.right]
    near = length_left <= length_g / 2.0

    left_unique, left_inverse = np.unique(table.left, return_inverse=True)
    right_unique, right_inverse = np.unique(table.right, return_inverse=True)
    xi_left = f1.ball.xi_on(xi_eval, left_unique)[left_inverse.ravel()]
    xi_right = f2.ball.xi_on(xi_eval, right_unique)[right_inverse.ravel()]
    phi_left = xi_left * (1.0 + length_left) ** (-2.0 * d)
    phi_right = xi_right * (1.0 + length_right) ** (-2.0 * d)

    size = len(target)
    scale = s1 * s2 * 2.0 ** (2.0 * d) * (1.0 + target.lengths) ** (-2.0 * d)
    pieces = []
    for mask, kernel in ((near, phi_left * xi_right), (~near, xi_left * phi_right)):
        piece = np.bincount(table.product, weights=magnitudes * mask, minlength=size)
        bound = scale * np.bincount(table.product, weights=kernel * mask, minlength=size)
        used = piece > 0
        if not np.any(used):
            pieces.append(0.0)
            continue
        pieces.append(float(np.max(np.maximum(piece[used] - bound[used], 0.0) / bound[used])))
    return pieces[0], pieces[1]


def check_convolution_bound(
    d: float,
    p: GroupPresentation,
    corpus: TestCorpus,
    radius: int,
    *,
    xi_eval: XiEvaluatorImpl | None = None,
    cap: int = DEFAULT_BALL_CAP,
    tolerances: Tolerances = DEFAULT_TOLERANCES,
) -> VerificationReport:
    """‖f₁∗f₂‖_{S^{2d}} against ‖f₁‖_{S^{2d}}‖f₂‖_{S^{2d}} over consecutive corpus pairs.

    Residual ``split`` is the worst relative violation of the two piece
    bounds; the ratios themselves are reported.
    """
    check_admissible(d, root_system(p.n))
    xi_eval = xi_eval or default_xi_evaluator(p.n)
    target = _target_for(corpus, p, radius, cap)
    ratios: list[float] = []
    split = 0.0
    for f1, f2 in zip(corpus.functions[::2], corpus.functions[1::2], strict=False):
        product = convolve_functions(f1, f2, target)
        denominator = schwartz_norm(f1, 2.0 * d, xi_eval) * schwartz_norm(f2, 2.0 * d, xi_eval)
        if denominator == 0.0:
            continue
        ratios.append(schwartz_norm(product, 2.0 * d, xi_eval) / denominator)
        near, far = split_pieces(f1, f2, target, d, xi_eval)
        split = max(split, near, far)
    max_ratio = max(ratios, default=0.0)
    logger.debug("convolution bound", extra={"radius": radius, "pairs": len(ratios), "max_ratio": max_ratio})
    return VerificationReport(
        statement=Statement.CONVOLUTION_BOUND,
        inputs={"group": p.name, "d": d, "radius": radius, "target_radius": target.radius, "seed": corpus.seed},
        residuals={"split": split},
        tolerances={"split": tolerances.subadditivity},
        empirical_constants={"max_ratio": max_ratio},
        sequences={"ratio": ratios},
    )


def sweep_convolution_bound(
    d: float,
    p: GroupPresentation,
    radii: Sequence[int],
    corpus_size: int,
    seed: int,
    *,
    xi_eval: XiEvaluatorImpl | None = None,
    cap: int = DEFAULT_BALL_CAP,
    tolerances: Tolerances = DEFAULT_TOLERANCES,
) -> VerificationReport:
    """Convolution check over support radii; passes when split bounds hold and max ratios stay bounded."""
    if not radii:
        raise ConfigurationError("convolution sweep needs at least one radius")
    xi_eval = xi_eval or default_xi_evaluator(p.n)
    target = generate_ball(p, 2 * max(radii), cap=cap)
    reports = []
    for radius in radii:
        corpus = build_corpus(target, corpus_size, seed + radius, support_radius=radius)
        reports.append(check_convolution_bound(d, p, corpus, radius, xi_eval=xi_eval, cap=cap, tolerances=tolerances))
    max_ratios = [report.empirical_constants["max_ratio"] for report in reports]
    split = max(report.residuals["split"] for report in reports)
    return VerificationReport(
        statement=Statement.CONVOLUTION_BOUND,
        inputs={
            "group": p.name,
            "d": d,
            "radii": list(radii),
            "target_radius": target.radius,
            "corpus_size": corpus_size,
            "seed": seed,
        },
        residuals={"split": split, "boundedness": boundedness_ratio(max_ratios)},
        tolerances={"split": tolerances.subadditivity, "boundedness": tolerances.boundedness},
        empirical_constants={"max_ratio": max(max_ratios)},
        sequences={"max_ratio": max_ratios},
    )


# ---------------------------------------------------------------------------
# Theorem, operator-norm item
# ---------------------------------------------------------------------------


def check_main_inequality(
    d: float,
    p: GroupPresentation,
    corpus: TestCorpus,
    R: int,  # noqa: N803
    grid: KQuadrature | None,
    *,
    xi_eval: XiEvaluatorImpl | None = None,
    tolerances: Tolerances = DEFAULT_TOLERANCES,
) -> VerificationReport:
    """‖λ(f)‖ against ‖f‖_{S^d} for the nonnegative corpus entries.

    Every estimate must stay below the ℓ¹ norm of f (residual ``l1_ceiling``).
    On SL(2) a projective ``grid`` adds the chain λ ≤ π (Shalom ordering) and
    π(f) ≤ K·‖f‖_{S^{2d}} with K = max_b Σ φ_{2d}c^{1/2} over B_s, the
    pointwise discretization constant of :func:`discretization_constant`
    taken on the π grid. Pass ``grid=None`` to skip the chain.
    """
    check_admissible(d, root_system(p.n))
    xi_eval = xi_eval or default_xi_evaluator(p.n)
    functions = [f for f in corpus.nonnegative if f.support_indices().size]
    if not functions:
        raise ConfigurationError("the main inequality needs a nonempty nonnegative corpus")
    for f in functions:
        check_nonnegative(f)
    support = max(f.support_radius for f in functions)
    if R < support:
        raise TargetTooSmallError(needed=support, available=R)
    chain = grid is not None and p.n == 2  # noqa: PLR2004
    chain_constant = 0.0
    if chain:
        ball = functions[0].ball
        prefix = ball.layer_end(support)
        weights = phi_weights(ball, 2.0 * d, xi_eval)[:prefix]
        chain_constant = float(np.max(weighted_half_density(ball.stack[:prefix], weights, grid)))

    ratios: list[float] = []
    ceiling = 0.0
    shalom = 0.0
    chain_violation = 0.0
    pi_drift = 0.0
    stalled = 0
    for f in functions:
        norm = schwartz_norm(f, d, xi_eval)
        if chain and grid is not None:
            comparison = shalom_compare(f, R, grid, tolerances.power_iteration)
            estimate = comparison.lambda_estimate
            shalom = max(shalom, violation(comparison.slack))
            bound = chain_constant * schwartz_norm(f, 2.0 * d, xi_eval)
            chain_violation = max(chain_violation, violation(bound - comparison.pi_estimate) / bound)
            pi_drift = max(pi_drift, comparison.pi_delta / bound)
        else:
            estimate = lambda_norm_sequence(f, [R], tolerances.power_iteration)[0]
        stalled += int(estimate.stalled)
        mass = float(np.sum(np.abs(f.as_complex())))
        ceiling = max(ceiling, violation(mass - estimate.lower) / mass)
        ratios.append(estimate.lower / norm)

    residuals: dict[str, float] = {"l1_ceiling": ceiling}
    limits: dict[str, float] = {"l1_ceiling": tolerances.power_iteration}
    if chain:
        residuals.update(shalom=shalom, chain=chain_violation)
        limits.update(shalom=tolerances.shalom, chain=tolerances.grid)
    return VerificationReport(
        statement=Statement.MAIN_INEQUALITY,
        inputs={
            "group": p.name,
            "d": d,
            "support_radius": support,
            "R": R,
            "grid_resolution": grid.resolution if grid is not None else None,
            "chain": "checked" if chain else "skipped",
            "seed": corpus.seed,
        },
        residuals=residuals,
        tolerances=limits,
        empirical_constants={
            "max_ratio": max(ratios),
            "chain_constant": chain_constant,
            "pi_drift": pi_drift,
            "stalled": float(stalled),
        },
        sequences={"ratio": ratios},
    )


def sweep_main_inequality(
    d: float,
    p: GroupPresentation,
    support_radii: Sequence[int],
    truncation_extra: int,
    corpus_size: int,
    seed: int,
    grid: KQuadrature | None,
    *,
    xi_eval: XiEvaluatorImpl | None = None,
    cap: int = DEFAULT_BALL_CAP,
    tolerances: Tolerances = DEFAULT_TOLERANCES,
) -> VerificationReport:
    """Main inequality over support radii s with R = s + ``truncation_extra``."""
    if not support_radii:
        raise ConfigurationError("main-inequality sweep needs at least one support radius")
    xi_eval = xi_eval or default_xi_evaluator(p.n)
    reports = []
    for support in support_radii:
        truncation = support + truncation_extra
        ball = generate_ball(p, truncation, cap=cap)
        corpus = build_corpus(ball, corpus_size, seed + support, support_radius=support)
        reports.append(check_main_inequality(d, p, corpus, truncation, grid, xi_eval=xi_eval, tolerances=tolerances))
    max_ratios = [report.empirical_constants["max_ratio"] for report in reports]
    merged = _merge_reports(Statement.MAIN_INEQUALITY, reports, {})
    residuals = {**merged.residuals, "boundedness": boundedness_ratio(max_ratios)}
    limits = {**merged.tolerances, "boundedness": tolerances.boundedness}
    return VerificationReport(
        statement=Statement.MAIN_INEQUALITY,
        inputs={
            "group": p.name,
            "d": d,
            "support_radii": list(support_radii),
            "truncation_radii": [s + truncation_extra for s in support_radii],
            "grid_resolution": grid.resolution if grid is not None else None,
            "chain": reports[0].inputs["chain"],
            "corpus_size": corpus_size,
            "seed": seed,
        },
        residuals=residuals,
        tolerances=limits,
        empirical_constants=merged.empirical_constants,
        sequences={"max_ratio": max_ratios},
    )


# ---------------------------------------------------------------------------
# Summability
# ---------------------------------------------------------------------------


def check_summability(
    p: GroupPresentation,
    d: float,
    radius: int,
    *,
    xi_eval: XiEvaluatorImpl | None = None,
    cap: int = DEFAULT_BALL_CAP,
    tolerances: Tolerances = DEFAULT_TOLERANCES,
) -> VerificationReport:
    """Partial sums of Σ Ξ²(γ)(1+L(γ))^{−2d} over balls of radius 1..radius.

    For admissible d the increments must shrink from radius 4 on (every
    increment ratio below 1); otherwise the profile is informational and
    reports the last increment ratio as a growth constant.
    """
    del tolerances
    if radius < 1:
        raise ConfigurationError(f"summability radius must be >= 1, got {radius}")
    xi_eval = xi_eval or default_xi_evaluator(p.n)
    roots = root_system(p.n)
    ball = generate_ball(p, radius, cap=cap)
    profile = summability_from_ball(ball, d, xi_eval)
    ratios = list(profile.increment_ratios)
    convergent = roots.is_admissible(d)
    # ratios[k] is the increment at radius k+3 over the one at radius k+2
    tail = ratios[max(0, SUMMABILITY_START - 2) :]
    residuals: dict[str, float] = {}
    limits: dict[str, float] = {}
    if convergent and tail:
        residuals = {"increment_ratio": max(tail)}
        limits = {"increment_ratio": 1.0}
    return VerificationReport(
        statement=Statement.SUMMABILITY,
        inputs={
            "group": p.name,
            "d": d,
            "radius": radius,
            "regime": "convergent" if convergent else "divergent",
            "start_radius": SUMMABILITY_START,
        },
        residuals=residuals,
        tolerances=limits,
        empirical_constants={
            "partial_sum": profile.partial_sums[-1],
            "growth": ratios[-1] if ratios else 0.0,
        },
        sequences={"partial_sum": list(profile.partial_sums), "increment_ratio": ratios},
    )


# ---------------------------------------------------------------------------
# Suite orchestration
# ---------------------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class SuiteSettings:
    """Parameters of one suite run.

    Attributes:
        presentation: Discrete subgroup under test.
        d: Decay exponent.
        seed: Base seed; every statement derives its own seed from it.
        corpus_size: Random functions per corpus (pairs for the convolution check).
        radius: Radius of the discretization and summability sweeps.
        truncation_extra: R − support radius for operator-norm estimates.
        support_radii: Support radii of the main-inequality sweep.
        convolution_radii: Support radii of the convolution sweep.
        grid_resolution: Projective boundary grid size (SL(2)).
        euler_resolution: Euler grid resolution (SL(3)).
        pi_resolution: Projective grid size of π(f) estimates.
        k_resolution: Circle grid size of K-averages (SL(2)).
        chamber_cutoff: Chamber quadrature cutoff.
        radial_samples: Radial-identity triples, ``mean_zero_samples`` of them mean-zero.
        cs_samples: Cauchy–Schwarz triples.
        stability_sample: Draws of the smaller stability estimate.
        neighborhood_radius: Radius r of U = exp{‖X‖₂ ≤ r}.
        audit_radius: Ball radius of the stability overlap audit.
        ball_cap: Maximal ball size.
        tolerances: Thresholds.
        statements: Statements to run, in report order.
    """

    presentation: GroupPresentation
    d: float
    seed: int = 42
    corpus_size: int = 8
    radius: int = 5
    truncation_extra: int = 4
    support_radii: tuple[int, ...] = (1, 2, 3)
    convolution_radii: tuple[int, ...] = (2, 3, 4)
    grid_resolution: int = 4096
    euler_resolution: int = 12
    pi_resolution: int = 512
    k_resolution: int = 32
    chamber_cutoff: float = 20.0
    radial_samples: int = 10
    mean_zero_samples: int = 2
    cs_samples: int = 100
    stability_sample: int = 64
    neighborhood_radius: float = 0.05
    audit_radius: int = 2
    ball_cap: int = DEFAULT_BALL_CAP
    tolerances: Tolerances = DEFAULT_TOLERANCES
    statements: tuple[Statement, ...] = tuple(Statement)

    @property
    def n(self) -> int:
        return self.presentation.n

    def describe(self) -> dict[str, Any]:
        return {
            "group": self.presentation.describe(),
            "d": self.d,
            "seed": self.seed,
            "corpus_size": self.corpus_size,
            "radius": self.radius,
            "truncation_extra": self.truncation_extra,
            "support_radii": list(self.support_radii),
            "convolution_radii": list(self.convolution_radii),
            "grid_resolution": self.grid_resolution,
            "euler_resolution": self.euler_resolution,
            "pi_resolution": self.pi_resolution,
            "k_resolution": self.k_resolution,
            "chamber_cutoff": self.chamber_cutoff,
            "statements": [s.value for s in self.statements],
            "tolerances": self.tolerances.as_dict(),
        }


@dataclass(eq=False)
class SuiteResources:
    """Grids, quadratures and 𝒞_d shared by the statements of one run.

    :meth:`prepare` builds everything up front so that statements running
    on worker threads only read.
    """

    settings: SuiteSettings
    _prepared: bool = field(default=False, init=False)

    @cached_property
    def boundary_grid(self) -> KQuadrature:
        resolution = self.settings.grid_resolution if self.settings.n == 2 else self.settings.euler_resolution  # noqa: PLR2004
        return build_boundary_quadrature(self.settings.n, resolution)

    @cached_property
    def pi_grid(self) -> KQuadrature | None:
        if self.settings.n != 2:  # noqa: PLR2004
            return None
        return build_boundary_quadrature(2, min(self.settings.grid_resolution, self.settings.pi_resolution))

    @cached_property
    def kgrid(self) -> KQuadrature:
        if self.settings.n == 2:  # noqa: PLR2004
            return build_k_quadrature(2, self.settings.k_resolution)
        return build_k_quadrature(self.settings.n, EULER_K_RESOLUTION)

    @cached_property
    def chamber(self) -> ChamberQuadrature:
        return build_chamber_quadrature(self.settings.n, self.settings.chamber_cutoff)

    @cached_property
    def radial_chamber(self) -> ChamberQuadrature:
        """Chamber grid of the radial checks; coarser on SL(3) where each node moves a K-average."""
        if self.settings.n == 2:  # noqa: PLR2004
            return self.chamber
        return build_chamber_quadrature(self.settings.n, self.settings.chamber_cutoff, shells=8, nodes_per_shell=3, angular_nodes=4)

    @cached_property
    def xi_eval(self) -> XiEvaluatorImpl:
        return default_xi_evaluator(self.settings.n, self.boundary_grid)

    @cached_property
    def cd(self) -> CdConstant:
        return cd_constant(self.settings.d, self.chamber, self.xi_eval)

    def prepare(self) -> SuiteResources:
        if not self._prepared:
            for name in ("boundary_grid", "pi_grid", "kgrid", "chamber", "radial_chamber", "xi_eval", "cd"):
                getattr(self, name)
            self._prepared = True
        return self


def _random_radial(rng: np.random.Generator, index: int) -> RadialTestFunction:
    if index % 3 == 2:  # noqa: PLR2004
        inner = float(rng.uniform(0.2, 2.0))
        return RadialShell(inner, inner + float(rng.uniform(0.5, 2.0)))
    return RadialBump(center=float(rng.uniform(0.5, 3.0)), width=float(rng.uniform(0.3, 1.0)), height=float(rng.uniform(0.5, 2.0)))


def _radial_triples(
    settings: SuiteSettings, resources: SuiteResources, offset: int
) -> list[tuple[RadialTestFunction, BoundaryFunction, BoundaryFunction]]:
    rng = np.random.default_rng(settings.seed + offset)
    grid = resources.boundary_grid
    one = BoundaryFunction.ones(grid)
    triples: list[tuple[RadialTestFunction, BoundaryFunction, BoundaryFunction]] = [(_random_radial(rng, 0), one, one)]
    for i in range(1, settings.radial_samples):
        xi = random_boundary_function(rng, grid, mean_zero=i <= settings.mean_zero_samples)
        eta = random_boundary_function(rng, grid)
        triples.append((_random_radial(rng, i), xi, eta))
    return triples


def _run_radial_identity(settings: SuiteSettings, resources: SuiteResources) -> VerificationReport:
    quad = resources.radial_chamber
    reports = [
        check_radial_identity(
            fr, xi, eta, quad, resources.boundary_grid, kgrid=resources.kgrid, xi_eval=resources.xi_eval, tolerances=settings.tolerances
        )
        for fr, xi, eta in _radial_triples(settings, resources, 1)
    ]
    return _merge_reports(Statement.RADIAL_IDENTITY, reports, {**reports[0].inputs, "mean_zero": settings.mean_zero_samples})


def _run_radial_sobolev(settings: SuiteSettings, resources: SuiteResources) -> VerificationReport:
    quad = resources.radial_chamber
    reports = [
        check_radial_sobolev(
            fr, xi, eta, settings.d, quad, kgrid=resources.kgrid, xi_eval=resources.xi_eval, tolerances=settings.tolerances
        )
        for fr, xi, eta in _radial_triples(settings, resources, 2)
    ]
    return _merge_reports(Statement.RADIAL_SOBOLEV, reports, reports[0].inputs)


def _run_cs_lemma(settings: SuiteSettings, resources: SuiteResources) -> VerificationReport:
    rng = np.random.default_rng(settings.seed + 3)
    grid = resources.boundary_grid
    one = BoundaryFunction.ones(grid)
    g = random_group_element(rng, settings.n, max_log=2.0)
    reports = [check_cs_lemma(g, one, one, tolerances=settings.tolerances)]
    for _ in range(1, settings.cs_samples):
        g = random_group_element(rng, settings.n, max_log=2.0)
        xi = random_boundary_function(rng, grid)
        eta = random_boundary_function(rng, grid)
        reports.append(check_cs_lemma(g, xi, eta, tolerances=settings.tolerances))
    return _merge_reports(Statement.CS_LEMMA, reports, {"n": settings.n, "grid_resolution": grid.resolution})


def _run_stability(settings: SuiteSettings, resources: SuiteResources) -> VerificationReport:
    return check_stability(
        settings.d,
        settings.presentation,
        BoundaryFunction.ones(resources.boundary_grid),
        settings.neighborhood_radius,
        settings.stability_sample,
        audit_radius=settings.audit_radius,
        seed=settings.seed + 4,
        cap=settings.ball_cap,
        tolerances=settings.tolerances,
    )


def _run_discretization(settings: SuiteSettings, resources: SuiteResources) -> VerificationReport:
    rng = np.random.default_rng(settings.seed + 5)
    xi = random_boundary_function(rng, resources.boundary_grid, nonnegative=True)
    return check_discretization(
        settings.d,
        settings.presentation,
        xi,
        settings.radius,
        cd=resources.cd,
        xi_eval=resources.xi_eval,
        cap=settings.ball_cap,
        tolerances=settings.tolerances,
    )


def _run_convolution(settings: SuiteSettings, resources: SuiteResources) -> VerificationReport:
    return sweep_convolution_bound(
        settings.d,
        settings.presentation,
        settings.convolution_radii,
        settings.corpus_size,
        settings.seed + 6,
        xi_eval=resources.xi_eval,
        cap=settings.ball_cap,
        tolerances=settings.tolerances,
    )


def _run_main_inequality(settings: SuiteSettings, resources: SuiteResources) -> VerificationReport:
    return sweep_main_inequality(
        settings.d,
        settings.presentation,
        settings.support_radii,
        settings.truncation_extra,
        settings.corpus_size,
        settings.seed + 7,
        resources.pi_grid,
        xi_eval=resources.xi_eval,
        cap=settings.ball_cap,
        tolerances=settings.tolerances,
    )


def _run_summability(settings: SuiteSettings, resources: SuiteResources) -> VerificationReport:
    return check_summability(
        settings.presentation,
        settings.d,
        settings.radius,
        xi_eval=resources.xi_eval,
        cap=settings.ball_cap,
        tolerances=settings.tolerances,
    )


StatementRunner = Callable[[SuiteSettings, SuiteResources], VerificationReport]

STATEMENT_RUNNERS: Mapping[Statement, StatementRunner] = {
    Statement.RADIAL_IDENTITY: _run_radial_identity,
    Statement.RADIAL_SOBOLEV: _run_radial_sobolev,
    Statement.CS_LEMMA: _run_cs_lemma,
    Statement.STABILITY: _run_stability,
    Statement.DISCRETIZATION: _run_discretization,
    Statement.CONVOLUTION_BOUND: _run_convolution,
    Statement.MAIN_INEQUALITY: _run_main_inequality,
    Statement.SUMMABILITY: _run_summability,
}


def parse_statements(selection: str) -> tuple[Statement, ...]:
    """``all`` or a comma-separated list of statement identifiers.

    Example:
        >>> parse_statements("lemma-cs, summability")
        (<Statement.CS_LEMMA: 'lemma-cs'>, <Statement.SUMMABILITY: 'summability'>)
    """
    text = selection.strip()
    if text in {"", "all"}:
        return tuple(Statement)
    chosen: list[Statement] = []
    for token in (part.strip() for part in text.split(",")):
        try:
            statement = Statement(token)
        except ValueError as exc:
            known = ", ".join(s.value for s in Statement)
            raise ConfigurationError(f"unknown statement {token!r}; expected 'all' or one of: {known}") from exc
        if statement not in chosen:
            chosen.append(statement)
    return tuple(chosen)


def run_suite(settings: SuiteSettings, ctx: ParallelContext = SEQUENTIAL) -> list[VerificationReport]:
    """Run the selected statements; reports come back in ``settings.statements`` order."""
    check_admissible(settings.d, root_system(settings.n))
    resources = SuiteResources(settings).prepare()
    logger.info(
        "suite started",
        extra={
            "group": settings.presentation.name,
            "d": settings.d,
            "statements": [s.value for s in settings.statements],
            "cd": resources.cd.value,
        },
    )

    def run_one(statement: Statement) -> VerificationReport:
        report = STATEMENT_RUNNERS[statement](settings, resources)
        payload = {"statement": statement.value, "passed": report.passed, "residuals": dict(report.residuals)}
        if report.passed:
            logger.info("statement checked", extra=payload)
        else:
            logger.warning("statement failed", extra={**payload, "failures": report.failures})
        return report

    reports = ctx.map_ordered(run_one, settings.statements)
    logger.info("suite finished", extra={"passed": sum(r.passed for r in reports), "total": len(reports)})
    return reports


__all__ = [
    "EULER_K_RESOLUTION",
    "STATEMENT_RUNNERS",
    "SUMMABILITY_START",
    "RadialSides",
    "SuiteResources",
    "SuiteSettings",
    "check_convolution_bound",
    "check_cs_lemma",
    "check_discretization",
    "check_main_inequality",
    "check_radial_identity",
    "check_radial_sobolev",
    "check_stability",
    "check_summability",
    "discretization_constant",
    "overlap_audit",
    "parse_statements",
    "radial_sides",
    "run_suite",
    "sample_neighborhood",
    "split_pieces",
    "sweep_convolution_bound",
    "sweep_main_inequality",
]

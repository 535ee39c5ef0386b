"""Lower bounds for ‖λ_Γ(f)‖ and the comparison with ‖π(f)‖.

The left-regular operator λ(f)v = f∗v is compressed to vectors supported on
the ball B_R. With M the sparse matrix of λ(f) restricted to B_R (columns)
and landing on the finite set supp(f)·B_R (rows), MᴴM = P_R λ(f*∗f) P_R, so
‖M‖ is a certified lower bound of ‖λ(f)‖ that grows with R.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Any

import numpy as np
import numpy.typing as npt
from scipy import sparse

from .boundary_rep import normalization_residual, pi_operator_norm
from .discrete_group import BallIndex, GroupFunction, generate_ball, rounded_entries
from .errors import NegativeMassError, PowerIterationStallError, SupportNotSymmetricError, TargetTooSmallError
from .haar_integration import KQuadrature, build_boundary_quadrature
from .lie_core import GroupElement
from .tolerances import DEFAULT_TOLERANCES

logger = logging.getLogger(__name__)

DEFAULT_MAX_ITERATIONS = 10_000
_PRODUCT_CHUNK = 2_000_000


# ---------------------------------------------------------------------------
# Adjoint
# ---------------------------------------------------------------------------


def adjoint(f: GroupFunction, *, extend: bool = False) -> GroupFunction:
    """f*(γ) = conj(f(γ⁻¹)).

    Word balls are closed under inversion, so the inverse of a support
    element is only missing when floating keys disagree; ``extend`` then
    retries on the ball one layer larger.

    Example:
        >>> from hcsbench.domain.discrete_group import builtin_presentation
        >>> ball = generate_ball(builtin_presentation("sanov"), 1)
        >>> adjoint(GroupFunction.delta(ball, 1)).support_indices().tolist()
        [3]
    """
    support = f.support_indices()
    inverse = f.ball.inverse_index[support]
    if np.any(inverse < 0):
        if extend:
            return adjoint(f.moved_to(generate_ball(f.ball.presentation, f.ball.radius + 1)), extend=False)
        missing = int(support[int(np.argmin(inverse))])
        raise SupportNotSymmetricError(f"inverse of {f.ball.word(missing)!r} lies outside the ball")
    values = GroupFunction.zeros(f.ball, exact=f.exact).values.copy()
    values[inverse] = np.conj(f.values[support])
    return GroupFunction(f.ball, values)


# ---------------------------------------------------------------------------
# Truncated operator
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class TruncatedConvolutionOperator:
    """λ(f) restricted to ℓ²(B_R).

    Attributes:
        domain_ball: Ball whose first ``domain_size`` elements form B_R.
        f: Convolution kernel stored over ``domain_ball``.
        truncation_radius: R.
        matrix: Sparse ``(rows, domain_size)`` matrix; rows are the distinct
            products γ·h with γ in the support and h in B_R.
    """

    domain_ball: BallIndex
    f: GroupFunction
    truncation_radius: int
    matrix: sparse.csr_matrix

    @classmethod
    def build(cls, f: GroupFunction, radius: int) -> TruncatedConvolutionOperator:
        if radius < f.support_radius:
            raise TargetTooSmallError(needed=f.support_radius, available=radius)
        ball = f.ball if f.ball.radius >= radius else generate_ball(f.ball.presentation, radius)
        kernel = f.moved_to(ball)
        domain_size = ball.layer_end(radius)
        support = kernel.support_indices()
        values = kernel.as_complex()[support]
        if support.size == 0:
            return cls(ball, kernel, radius, sparse.csr_matrix((1, domain_size), dtype=np.complex128))

        left = ball.integer_stack[support] if ball.integer_stack is not None else ball.stack[support]
        right = ball.integer_stack[:domain_size] if ball.integer_stack is not None else ball.stack[:domain_size]
        n = ball.n
        key_blocks: list[npt.NDArray[np.int64]] = []
        step = max(1, _PRODUCT_CHUNK // domain_size)
        for start in range(0, support.size, step):
            products = (left[start : start + step, np.newaxis] @ right[np.newaxis]).reshape(-1, n * n)
            if ball.integer_stack is not None:
                key_blocks.append(np.asarray(products, dtype=np.int64))
            else:
                key_blocks.append(rounded_entries(np.asarray(products, dtype=np.float64), ball.quantum))
        keys = np.concatenate(key_blocks)
        _, rows = np.unique(keys, axis=0, return_inverse=True)
        rows = rows.ravel()
        columns = np.tile(np.arange(domain_size), support.size)
        data = np.repeat(values, domain_size)
        matrix = sparse.coo_matrix((data, (rows, columns)), shape=(int(rows.max()) + 1, domain_size)).tocsr()
        return cls(ball, kernel, radius, matrix)

    @property
    def domain_size(self) -> int:
        return int(self.matrix.shape[1])

    def apply(self, v: npt.ArrayLike) -> npt.NDArray[np.complex128]:
        return np.asarray(self.matrix @ np.asarray(v))

    def gram_apply(self, v: npt.ArrayLike) -> npt.NDArray[Any]:
        """MᴴM v, i.e. P_R λ(f*∗f) P_R v."""
        return np.asarray(self.matrix.conj().T @ (self.matrix @ np.asarray(v)))


# ---------------------------------------------------------------------------
# Power iteration
# ---------------------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class NormEstimate:
    """Power-iteration lower bound of ‖λ(f)‖ at truncation radius R."""

    lower: float
    iterations: int
    residual: float
    truncation_radius: int
    stalled: bool = False
    domain_size: int = 0

    def to_dict(self) -> dict[str, Any]:
        return {
            "lower": self.lower,
            "residual": self.residual,
            "R": self.truncation_radius,
            "iterations": self.iterations,
            "stalled": self.stalled,
            "domain_size": self.domain_size,
        }


def lambda_norm_lower(
    f: GroupFunction,
    radius: int,
    tol: float = DEFAULT_TOLERANCES.power_iteration,
    *,
    max_iterations: int = DEFAULT_MAX_ITERATIONS,
    seed: int = 0,
    strict: bool = False,
) -> NormEstimate:
    """‖P_R λ(f*∗f) P_R‖^{1/2} by power iteration on MᴴM.

    The start vector is positive and seeded; the Rayleigh quotient never
    exceeds the top eigenvalue, so the estimate may only undershoot.
    Stopping uses the relative eigen-residual ‖Av − θv‖/θ.

    Example:
        >>> from hcsbench.domain.discrete_group import builtin_presentation
        >>> ball = generate_ball(builtin_presentation("sanov"), 2)
        >>> round(lambda_norm_lower(GroupFunction.delta(ball, 3), 2).lower, 12)
        1.0
    """
    operator = TruncatedConvolutionOperator.build(f, radius)
    size = operator.domain_size
    if operator.matrix.nnz == 0:
        return NormEstimate(0.0, 0, 0.0, radius, False, size)
    rng = np.random.default_rng(seed)
    v = rng.uniform(0.5, 1.5, size).astype(operator.matrix.dtype)
    v /= np.linalg.norm(v)
    theta = 0.0
    residual = math.inf
    iterations = 0
    for iterations in range(1, max_iterations + 1):  # noqa: B007
        w = operator.gram_apply(v)
        theta = float(np.vdot(v, w).real)
        if theta <= 0.0:
            break
        residual = float(np.linalg.norm(w - theta * v)) / theta
        v = w / np.linalg.norm(w)
        if residual <= tol:
            break
    stalled = residual > tol
    estimate = NormEstimate(
        lower=math.sqrt(max(theta, 0.0)),
        iterations=iterations,
        residual=0.0 if not math.isfinite(residual) else residual,
        truncation_radius=radius,
        stalled=stalled,
        domain_size=size,
    )
    if stalled:
        logger.warning("power iteration stalled", extra=estimate.to_dict())
        if strict:
            raise PowerIterationStallError(residual=residual, tolerance=tol, iterations=iterations)
    else:
        logger.debug("power iteration converged", extra=estimate.to_dict())
    return estimate


def lambda_norm_sequence(f: GroupFunction, radii: list[int], tol: float = DEFAULT_TOLERANCES.power_iteration) -> list[NormEstimate]:
    """Estimates over increasing truncation radii (the reported R-indexed sequence)."""
    ball = f.ball if f.ball.radius >= max(radii) else generate_ball(f.ball.presentation, max(radii))
    kernel = f.moved_to(ball)
    return [lambda_norm_lower(kernel, radius, tol) for radius in sorted(radii)]


def free_group_radial_norm(rank: int, radius: int) -> float:
    """Exact ‖λ(χ_{S∪S⁻¹}) P_R‖ on the free group of the given rank.

    On normalized sphere indicators the operator is tridiagonal with
    off-diagonal √(2·rank) between levels 0 and 1 and √(2·rank − 1) beyond;
    the top singular vector of the compression is radial, so the singular
    value of this ``(R+2)×(R+1)`` matrix is the compressed norm. It tends to
    Kesten's value 2√(2·rank − 1).

    Example:
        >>> free_group_radial_norm(2, 0)
        2.0
        >>> free_group_radial_norm(2, 60) < kesten_norm(2)
        True
    """
    matrix = np.zeros((radius + 2, radius + 1))
    first = math.sqrt(2.0 * rank)
    later = math.sqrt(2.0 * rank - 1.0)
    for level in range(radius + 1):
        matrix[level + 1, level] = first if level == 0 else later
        if level >= 1:
            matrix[level - 1, level] = first if level == 1 else later
    return float(np.linalg.norm(matrix, 2))


def kesten_norm(rank: int) -> float:
    """‖λ(χ_{S∪S⁻¹})‖ on the free group of the given rank."""
    return 2.0 * math.sqrt(2.0 * rank - 1.0)


# ---------------------------------------------------------------------------
# Shalom comparison
# ---------------------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class ShalomComparison:
    """λ-side lower bound against the boundary-representation norm.

    Attributes:
        lambda_estimate: Power-iteration lower bound of ‖λ(f)‖.
        pi_estimate: ‖π(f)‖ on the requested grid.
        pi_refined: ‖π(f)‖ on the grid of twice the resolution.
        grid_tolerance: Largest normalization residual over the support.
    """

    lambda_estimate: NormEstimate
    pi_estimate: float
    pi_refined: float
    grid_tolerance: float

    @property
    def lambda_lower(self) -> float:
        return self.lambda_estimate.lower

    @property
    def pi_delta(self) -> float:
        return abs(self.pi_refined - self.pi_estimate)

    @property
    def combined_tolerance(self) -> float:
        return self.grid_tolerance + self.pi_delta + self.lambda_estimate.residual * self.lambda_lower

    @property
    def slack(self) -> float:
        """pi_estimate + combined tolerance − lambda_lower; nonnegative when ordered."""
        return self.pi_estimate + self.combined_tolerance - self.lambda_lower

    def to_dict(self) -> dict[str, Any]:
        return {
            "lambda": self.lambda_estimate.to_dict(),
            "pi_estimate": self.pi_estimate,
            "pi_refined": self.pi_refined,
            "pi_delta": self.pi_delta,
            "grid_tolerance": self.grid_tolerance,
            "slack": self.slack,
        }


def check_nonnegative(f: GroupFunction) -> None:
    values = f.as_complex()
    bad = np.flatnonzero((values.real < 0) | (values.imag != 0))
    if bad.size:
        index = int(bad[0])
        raise NegativeMassError(index=index, value=float(values[index].real))


def shalom_compare(
    f: GroupFunction,
    radius: int,
    grid: KQuadrature,
    tol: float = DEFAULT_TOLERANCES.power_iteration,
) -> ShalomComparison:
    """Both sides of ‖λ(f)‖ ≤ ‖π(f)‖ for a nonnegative f."""
    check_nonnegative(f)
    estimate = lambda_norm_lower(f, radius, tol)
    pi_value = pi_operator_norm(f, grid)
    refined_grid = build_boundary_quadrature(grid.n, 2 * len(grid))
    pi_refined = pi_operator_norm(f, refined_grid)
    support = f.support_indices()
    grid_tolerance = max(
        (normalization_residual(GroupElement(f.ball.stack[i]), grid) for i in support),
        default=0.0,
    )
    comparison = ShalomComparison(estimate, pi_value, pi_refined, grid_tolerance)
    logger.debug("shalom comparison", extra=comparison.to_dict())
    return comparison


__all__ = [
    "DEFAULT_MAX_ITERATIONS",
    "NormEstimate",
    "ShalomComparison",
    "TruncatedConvolutionOperator",
    "adjoint",
    "check_nonnegative",
    "free_group_radial_norm",
    "kesten_norm",
    "lambda_norm_lower",
    "lambda_norm_sequence",
    "shalom_compare",
]

"""Furstenberg boundary, Radon–Nikodym cocycle and the quasi-regular representation.

The boundary G/P is modelled as K/M: for n=2 the projective line sampled at
θ ∈ [0, π), for n=3 the flag manifold sampled through the SO(3) Euler grid.
A boundary point is represented by an orthogonal frame k; g⁻¹·kM is the
orthogonal factor of g⁻¹k.

The cocycle c(g, kM) = e^{−2ρ(H_Iw(g⁻¹k))} has two independent
realizations:

* ``iwasawa``: log-diagonal of the orthogonal–triangular factorization;
* ``boundary``: exterior-power volumes of the moved flag,
  c = Π_{i<n} ‖(g⁻¹k)e₁ ∧ … ∧ (g⁻¹k)e_i‖^{−2}, i.e. the Jacobian of the
  boundary action.

The quasi-regular representation acts by (π(g)ξ)(b) = c(g,b)^{1/2} ξ(g⁻¹b)
and Ξ(g) = ⟨π(g)1, 1⟩.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Callable
from dataclasses import dataclass
from typing import TYPE_CHECKING, Literal

import numpy as np
import numpy.typing as npt
from scipy import sparse
from scipy.interpolate import CubicSpline
from scipy.sparse.linalg import svds

from .enums import XiMethod
from .errors import (
    GridMismatchError,
    InterpolationOutOfRangeError,
    NonFiniteError,
    UnsupportedDimensionError,
)
from .haar_integration import KQuadrature
from .lie_core import FloatArray, GroupElement, cartan_projection_batch, iwasawa_batch, root_system

if TYPE_CHECKING:
    from .discrete_group import GroupFunction

logger = logging.getLogger(__name__)

ComplexArray = npt.NDArray[np.complex128]
FrameFormula = Callable[[FloatArray], npt.NDArray[np.complexfloating]]
Interpolation = Literal["linear", "cubic"]

#: Group elements handled per vectorized chunk (elements × grid nodes).
_CHUNK_CELLS = 4_000_000
#: Dense SVD is used for π(f) up to this grid size.
_DENSE_LIMIT = 2048
#: Exponent cap in the horocyclic integrand; beyond it the integrand is below e^{−300}.
_HOROCYCLE_CLIP = 300.0


# ---------------------------------------------------------------------------
# Cocycle
# ---------------------------------------------------------------------------


def _as_stack(stack: npt.ArrayLike | GroupElement) -> FloatArray:
    if isinstance(stack, GroupElement):
        return stack.entries[np.newaxis]
    values = np.asarray(stack, dtype=np.float64)
    return values[np.newaxis] if values.ndim == 2 else values  # noqa: PLR2004


def _cocycle_iwasawa(moved: FloatArray) -> FloatArray:
    n = moved.shape[-1]
    _, logs = iwasawa_batch(moved.reshape(-1, n, n))
    rho = root_system(n).rho
    return np.exp(-2.0 * (logs @ rho)).reshape(moved.shape[:-2])


def _cocycle_exterior(moved: FloatArray) -> FloatArray:
    n = moved.shape[-1]
    log_volume = np.zeros(moved.shape[:-2])
    for i in range(1, n):
        columns = moved[..., :, :i]
        gram = np.swapaxes(columns, -1, -2) @ columns
        log_volume += np.log(np.linalg.det(gram))
    return np.exp(-log_volume)


def cocycle_at_frames(
    g_inv: FloatArray, frames: FloatArray, method: XiMethod = XiMethod.BOUNDARY
) -> FloatArray:
    """c(g, kM) for a stack of inverse elements ``(M, n, n)`` and frames ``(N, n, n)``.

    Returns an ``(M, N)`` array. The representation itself uses the
    exterior-power form; the triangular form serves as the independent check.
    """
    moved = g_inv[:, np.newaxis] @ frames[np.newaxis]
    values = _cocycle_exterior(moved) if method is XiMethod.BOUNDARY else _cocycle_iwasawa(moved)
    if not np.all(np.isfinite(values)):
        raise NonFiniteError("cocycle")
    return values


@dataclass(frozen=True, slots=True)
class CocycleValue:
    """A single Radon–Nikodym derivative c(g, b) > 0."""

    value: float

    def __post_init__(self) -> None:
        if not (self.value > 0 and math.isfinite(self.value)):
            raise NonFiniteError(f"cocycle value {self.value!r}")


def cocycle_values(g: GroupElement, grid: KQuadrature, method: XiMethod = XiMethod.IWASAWA) -> FloatArray:
    """c(g, b) at every node of the boundary grid."""
    _check_dim(g, grid)
    return cocycle_at_frames(np.linalg.inv(g.entries)[np.newaxis], np.asarray(grid.nodes), method)[0]


def cocycle(g: GroupElement, grid: KQuadrature, node: int, method: XiMethod = XiMethod.IWASAWA) -> CocycleValue:
    """c(g, b) at one grid node.

    Example:
        >>> from hcsbench.domain.haar_integration import build_boundary_quadrature
        >>> grid = build_boundary_quadrature(2, 16)
        >>> round(cocycle(GroupElement.identity(2), grid, 3).value, 12)
        1.0
    """
    _check_dim(g, grid)
    frames = np.asarray(grid.nodes)[node : node + 1]
    return CocycleValue(float(cocycle_at_frames(np.linalg.inv(g.entries)[np.newaxis], frames, method)[0, 0]))


def normalization_residual(g: GroupElement, grid: KQuadrature) -> float:
    """|Σ_b w_b c(g,b) − 1|, the discrete defect of g_*ν being a probability."""
    return abs(float(np.dot(grid.weights, cocycle_values(g, grid))) - 1.0)


def boundary_frames(g_inv: FloatArray, frames: FloatArray) -> FloatArray:
    """Orthogonal factors of g⁻¹k: the frames of the moved boundary points."""
    moved = g_inv[np.newaxis] @ frames
    k, _ = iwasawa_batch(moved)
    return k


def projective_angle(frames: FloatArray) -> FloatArray:
    """Angle in [0, π) of the line spanned by the first frame column (n=2)."""
    return np.mod(np.arctan2(frames[:, 1, 0], frames[:, 0, 0]), np.pi)


def _check_dim(g: GroupElement, grid: KQuadrature) -> None:
    if g.dim != grid.n:
        raise GridMismatchError(f"element of dimension {g.dim} on a grid for n={grid.n}")


# ---------------------------------------------------------------------------
# Boundary functions
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class BoundaryFunction:
    """Function on G/P sampled on a boundary grid.

    Attributes:
        grid: Boundary quadrature (``projective`` for n=2, ``euler`` for n=3).
        samples: Complex values aligned with the grid nodes.
        formula: Optional closed form on frames ``(N, n, n) -> (N,)``; must be
            invariant under right multiplication by M. Required to move
            functions on the n=3 boundary.
        constant: Set for constant functions (e.g. the all-ones vector).

    Example:
        >>> from hcsbench.domain.haar_integration import build_boundary_quadrature
        >>> one = BoundaryFunction.ones(build_boundary_quadrature(2, 32))
        >>> pairing(one, one)
        (1+0j)
    """

    grid: KQuadrature
    samples: ComplexArray
    formula: FrameFormula | None = None
    constant: complex | None = None

    def __post_init__(self) -> None:
        samples = np.array(self.samples, dtype=np.complex128, copy=True)
        samples.setflags(write=False)
        object.__setattr__(self, "samples", samples)
        if samples.shape != (len(self.grid),):
            raise GridMismatchError(f"{samples.size} samples for a grid of {len(self.grid)} nodes")
        if not np.all(np.isfinite(samples)):
            raise NonFiniteError("boundary samples")

    @classmethod
    def ones(cls, grid: KQuadrature) -> BoundaryFunction:
        return cls.constant_function(grid, 1.0)

    @classmethod
    def constant_function(cls, grid: KQuadrature, value: complex) -> BoundaryFunction:
        def formula(frames: FloatArray) -> ComplexArray:
            return np.full(frames.shape[0], value, dtype=np.complex128)

        return cls(grid, np.full(len(grid), value, dtype=np.complex128), formula, complex(value))

    @classmethod
    def from_samples(cls, grid: KQuadrature, samples: npt.ArrayLike) -> BoundaryFunction:
        return cls(grid, np.asarray(samples, dtype=np.complex128))

    @classmethod
    def from_formula(cls, grid: KQuadrature, formula: FrameFormula) -> BoundaryFunction:
        return cls(grid, np.asarray(formula(np.asarray(grid.nodes)), dtype=np.complex128), formula)

    @property
    def n(self) -> int:
        return self.grid.n

    @property
    def norm1(self) -> float:
        return float(np.dot(self.grid.weights, np.abs(self.samples)))

    @property
    def norm2(self) -> float:
        return math.sqrt(float(np.dot(self.grid.weights, np.abs(self.samples) ** 2)))

    @property
    def is_nonnegative(self) -> bool:
        return bool(np.all(self.samples.imag == 0) and np.all(self.samples.real >= 0))

    def mean(self) -> complex:
        """⟨ξ, 1⟩."""
        return complex(np.dot(self.grid.weights, self.samples))

    def map_values(self, fn: Callable[[ComplexArray], ComplexArray]) -> BoundaryFunction:
        """Pointwise transform, carried through the closed form when present."""
        formula = self.formula
        mapped: FrameFormula | None = None
        if formula is not None:

            def mapped(frames: FloatArray) -> ComplexArray:
                return fn(np.asarray(formula(frames), dtype=np.complex128))

        return BoundaryFunction(self.grid, fn(self.samples), mapped)

    def abs_squared(self) -> BoundaryFunction:
        return self.map_values(lambda v: np.abs(v) ** 2 + 0j)

    def scaled(self, factor: complex) -> BoundaryFunction:
        result = self.map_values(lambda v: v * factor)
        if self.constant is not None:
            return BoundaryFunction(result.grid, result.samples, result.formula, self.constant * factor)
        return result

    def evaluate(self, frames: FloatArray, interpolation: Interpolation = "linear") -> ComplexArray:
        """Values at arbitrary boundary frames."""
        if self.formula is not None:
            return np.asarray(self.formula(frames), dtype=np.complex128)
        if self.grid.kind != "projective":
            raise InterpolationOutOfRangeError("sampled functions on the n=3 boundary need a closed-form formula")
        theta = projective_angle(frames)
        if interpolation == "cubic":
            return _cubic_periodic(self.samples, theta)
        weights, columns = linear_interpolation_weights(theta, len(self.grid))
        return weights[:, 0] * self.samples[columns[:, 0]] + weights[:, 1] * self.samples[columns[:, 1]]

    def k_average(self, kgrid: KQuadrature) -> BoundaryFunction:
        """ξ^K(x) = ∫_K ξ(k⁻¹x) dk computed by moving ξ with every node of ``kgrid``."""
        pieces = [apply_pi(GroupElement(node, orthogonal=True), self) for node in np.asarray(kgrid.nodes)]
        samples = np.tensordot(kgrid.weights, np.stack([piece.samples for piece in pieces]), axes=1)
        formula: FrameFormula | None = None
        if all(piece.formula is not None for piece in pieces):
            formulas = [piece.formula for piece in pieces]

            def formula(frames: FloatArray) -> ComplexArray:
                stacked = np.stack([np.asarray(f(frames)) for f in formulas if f is not None])
                return np.tensordot(kgrid.weights, stacked, axes=1)

        return BoundaryFunction(self.grid, samples, formula)


def linear_interpolation_weights(theta: FloatArray, size: int) -> tuple[FloatArray, npt.NDArray[np.int64]]:
    """Periodic piecewise-linear weights on the uniform projective grid.

    Returns ``(weights, columns)`` of shape ``(N, 2)``; weights are convex
    combinations, so nonnegative data stays nonnegative.
    """
    position = np.mod(theta, np.pi) * size / np.pi
    left = np.floor(position).astype(np.int64) % size
    frac = position - np.floor(position)
    weights = np.stack([1.0 - frac, frac], axis=-1)
    columns = np.stack([left, (left + 1) % size], axis=-1)
    return weights, columns


def _cubic_periodic(samples: ComplexArray, theta: FloatArray) -> ComplexArray:
    size = samples.size
    knots = np.pi * np.arange(size + 1) / size
    closed = np.concatenate([samples, samples[:1]])
    real = CubicSpline(knots, closed.real, bc_type="periodic")(theta)
    imag = CubicSpline(knots, closed.imag, bc_type="periodic")(theta)
    return np.asarray(real + 1j * imag, dtype=np.complex128)


# ---------------------------------------------------------------------------
# Representation
# ---------------------------------------------------------------------------


def apply_pi(g: GroupElement, xi: BoundaryFunction, interpolation: Interpolation = "linear") -> BoundaryFunction:
    """(π(g)ξ)(b) = c(g,b)^{1/2} ξ(g⁻¹b)."""
    _check_dim(g, xi.grid)
    g_inv = np.linalg.inv(g.entries)
    frames = np.asarray(xi.grid.nodes)
    half = np.sqrt(cocycle_at_frames(g_inv[np.newaxis], frames)[0])
    samples = half * xi.evaluate(boundary_frames(g_inv, frames), interpolation)
    formula: FrameFormula | None = None
    if xi.formula is not None:
        source = xi

        def formula(points: FloatArray) -> ComplexArray:
            weight = np.sqrt(cocycle_at_frames(g_inv[np.newaxis], points)[0])
            return weight * source.evaluate(boundary_frames(g_inv, points))

    return BoundaryFunction(xi.grid, samples, formula)


def pairing(xi: BoundaryFunction, eta: BoundaryFunction) -> complex:
    """⟨ξ, η⟩ = Σ_b w_b ξ(b) conj(η(b))."""
    if not xi.grid.compatible(eta.grid):
        raise GridMismatchError("boundary functions live on different grids")
    return complex(np.dot(xi.grid.weights, xi.samples * np.conj(eta.samples)))


def coefficients_with_one(stack: npt.ArrayLike, xi: BoundaryFunction) -> FloatArray | ComplexArray:
    """⟨π(γ)1, ξ⟩ for every element of a stack, on the grid of ξ."""
    elements = _as_stack(stack)
    inverses = np.linalg.inv(elements)
    frames = np.asarray(xi.grid.nodes)
    weighted = xi.grid.weights * np.conj(xi.samples)
    out = np.empty(elements.shape[0], dtype=np.complex128)
    step = max(1, _CHUNK_CELLS // len(xi.grid))
    for start in range(0, elements.shape[0], step):
        block = np.sqrt(cocycle_at_frames(inverses[start : start + step], frames))
        out[start : start + step] = block @ weighted
    return out.real if xi.is_nonnegative else out


def weighted_half_density(stack: npt.ArrayLike, weights: npt.ArrayLike, grid: KQuadrature) -> FloatArray:
    """b ↦ Σ_γ w_γ c(γ, b)^{1/2} on the grid nodes.

    Its maximum is the supremum of Σ_γ w_γ ⟨π(γ)1, ζ⟩ over densities ζ ≥ 0
    with ‖ζ‖₁ = 1.
    """
    elements = _as_stack(stack)
    coefficients = np.asarray(weights, dtype=np.float64)
    inverses = np.linalg.inv(elements)
    frames = np.asarray(grid.nodes)
    out = np.zeros(len(grid))
    step = max(1, _CHUNK_CELLS // len(grid))
    for start in range(0, elements.shape[0], step):
        block = np.sqrt(cocycle_at_frames(inverses[start : start + step], frames))
        out += coefficients[start : start + step] @ block
    return out


# ---------------------------------------------------------------------------
# Harish-Chandra function
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class GridXi:
    """Ξ on a boundary/K grid through either cocycle backend."""

    grid: KQuadrature
    method: XiMethod = XiMethod.BOUNDARY

    @property
    def n(self) -> int:
        return self.grid.n

    def __call__(self, stack: npt.ArrayLike) -> FloatArray:
        elements = _as_stack(stack)
        inverses = np.linalg.inv(elements)
        frames = np.asarray(self.grid.nodes)
        out = np.empty(elements.shape[0])
        step = max(1, _CHUNK_CELLS // len(self.grid))
        for start in range(0, elements.shape[0], step):
            block = cocycle_at_frames(inverses[start : start + step], frames, self.method)
            out[start : start + step] = np.sqrt(block) @ self.grid.weights
        return out

    def at_chamber(self, h: npt.ArrayLike) -> FloatArray:
        values = np.atleast_2d(np.asarray(h, dtype=np.float64))
        diagonal = np.exp(values)[:, :, np.newaxis] * np.eye(values.shape[1])
        return self(diagonal)


@dataclass(frozen=True)
class HorocyclicXi:
    """Grid-free Ξ on SL(2,ℝ).

    Integrating over the opposite unipotent subgroup in the coordinate
    x = sinh y gives

        Ξ(a_t) = e^{−t/2}·(1/π)·∫_ℝ dy / √(1 + e^{−2t} sinh² y),

    with t = α(H). The integrand is analytic in the strip |Im y| < π/2, so
    the trapezoid rule converges like exp(−π²/step); the window extends
    ``margin`` beyond |y| = t where the integrand has decayed below e^{−margin}.
    """

    step: float = 0.1
    margin: float = 40.0
    n: int = 2
    chunk: int = 2048

    def __post_init__(self) -> None:
        if self.n != 2:  # noqa: PLR2004
            raise UnsupportedDimensionError(self.n, (2,))

    def of_t(self, t: npt.ArrayLike) -> FloatArray:
        values = np.abs(np.atleast_1d(np.asarray(t, dtype=np.float64)))
        if not np.all(np.isfinite(values)):
            raise NonFiniteError("horocyclic Ξ argument")
        out = np.empty(values.shape)
        order = np.argsort(values, kind="stable")
        for start in range(0, values.size, self.chunk):
            idx = order[start : start + self.chunk]
            block = values[idx]
            half_width = float(block.max()) + self.margin
            count = int(math.ceil(half_width / self.step))
            y = self.step * np.arange(-count, count + 1)
            # e^{−t}·sinh|y| as a difference of exponentials, finite for every t
            shift = np.minimum(np.abs(y)[np.newaxis] - block[:, np.newaxis], _HOROCYCLE_CLIP)
            scaled = 0.5 * (np.exp(shift) - np.exp(shift - 2.0 * np.abs(y)[np.newaxis]))
            integral = self.step * np.sum(1.0 / np.sqrt(1.0 + scaled**2), axis=1)
            out[idx] = np.exp(-block / 2.0) * integral / math.pi
        return out

    def __call__(self, stack: npt.ArrayLike) -> FloatArray:
        h = cartan_projection_batch(_as_stack(stack))
        return self.of_t(h[:, 0] - h[:, 1])

    def at_chamber(self, h: npt.ArrayLike) -> FloatArray:
        values = np.atleast_2d(np.asarray(h, dtype=np.float64))
        return self.of_t(values[:, 0] - values[:, 1])


XiEvaluatorImpl = GridXi | HorocyclicXi


def make_xi_evaluator(method: XiMethod | str, grid: KQuadrature | None = None) -> XiEvaluatorImpl:
    """Build a Ξ evaluator for the named backend."""
    chosen = XiMethod(method)
    if chosen is XiMethod.HOROCYCLIC:
        return HorocyclicXi()
    if grid is None:
        raise GridMismatchError(f"the {chosen.value} backend needs a grid")
    return GridXi(grid, chosen)


def default_xi_evaluator(n: int, grid: KQuadrature | None = None) -> XiEvaluatorImpl:
    """Horocyclic Ξ on SL(2,ℝ); the boundary-grid backend otherwise."""
    if n == 2:  # noqa: PLR2004
        return HorocyclicXi()
    return make_xi_evaluator(XiMethod.BOUNDARY, grid)


def harish_chandra_xi(g: GroupElement, method: XiMethod | str = XiMethod.BOUNDARY, grid: KQuadrature | None = None) -> float:
    """Ξ(g) by the chosen backend.

    The ``boundary`` backend is literally ⟨π(g)1, 1⟩ built through
    :func:`apply_pi`; ``iwasawa`` sums e^{−ρ(H_Iw(g⁻¹k))} over the grid.

    Example:
        >>> from hcsbench.domain.haar_integration import build_boundary_quadrature
        >>> grid = build_boundary_quadrature(2, 64)
        >>> round(harish_chandra_xi(GroupElement.identity(2), "iwasawa", grid), 12)
        1.0
    """
    chosen = XiMethod(method)
    if chosen is XiMethod.BOUNDARY:
        if grid is None:
            raise GridMismatchError("the boundary backend needs a grid")
        one = BoundaryFunction.ones(grid)
        return float(pairing(apply_pi(g, one), one).real)
    return float(make_xi_evaluator(chosen, grid)(g.entries)[0])


def xi_decay_profile(xi: XiEvaluatorImpl, t: npt.ArrayLike) -> tuple[FloatArray, FloatArray]:
    """Ξ(a_t) and the envelope e^{−t/2}(1 + t/√2) on SL(2,ℝ)."""
    values = np.asarray(t, dtype=np.float64)
    h = np.stack([values / 2.0, -values / 2.0], axis=-1)
    return xi.at_chamber(h), np.exp(-values / 2.0) * (1.0 + values / math.sqrt(2.0))


# ---------------------------------------------------------------------------
# π(f) for finitely supported f on Γ
# ---------------------------------------------------------------------------


def pi_operator_matrix(stack: FloatArray, values: npt.ArrayLike, grid: KQuadrature) -> sparse.csr_matrix:
    """Sparse matrix of Σ f(γ) π(γ) on the projective grid (linear interpolation)."""
    if grid.kind != "projective":
        raise GridMismatchError("π(f) matrices are assembled on the n=2 projective grid")
    size = len(grid)
    frames = np.asarray(grid.nodes)
    coefficients = np.asarray(values, dtype=np.complex128)
    rows_all: list[npt.NDArray[np.int64]] = []
    cols_all: list[npt.NDArray[np.int64]] = []
    data_all: list[ComplexArray] = []
    row_index = np.repeat(np.arange(size), 2)
    for element, coefficient in zip(stack, coefficients, strict=True):
        g_inv = np.linalg.inv(element)
        half = np.sqrt(cocycle_at_frames(g_inv[np.newaxis], frames)[0])
        weights, columns = linear_interpolation_weights(projective_angle(boundary_frames(g_inv, frames)), size)
        rows_all.append(row_index)
        cols_all.append(columns.ravel())
        data_all.append((coefficient * half[:, np.newaxis] * weights).ravel())
    matrix = sparse.coo_matrix(
        (np.concatenate(data_all), (np.concatenate(rows_all), np.concatenate(cols_all))), shape=(size, size)
    )
    return matrix.tocsr()


def pi_operator_norm(f: GroupFunction, grid: KQuadrature) -> float:
    """Largest singular value of the discretized π(f) = Σ f(γ)π(γ).

    The grid weights are uniform, so the weighted ℓ² norm equals the
    Euclidean spectral norm of the matrix.
    """
    if f.ball.n != grid.n:
        raise GridMismatchError(f"function on n={f.ball.n} against a grid for n={grid.n}")
    support = f.support_indices()
    if support.size == 0:
        return 0.0
    matrix = pi_operator_matrix(f.ball.stack[support], f.values[support], grid)
    if len(grid) <= _DENSE_LIMIT:
        value = float(np.linalg.norm(matrix.toarray(), 2))
    else:
        value = float(svds(matrix, k=1, return_singular_vectors=False)[0])
    logger.debug("pi operator norm", extra={"support": int(support.size), "grid": len(grid), "value": value})
    return value


__all__ = [
    "BoundaryFunction",
    "CocycleValue",
    "GridXi",
    "HorocyclicXi",
    "XiEvaluatorImpl",
    "apply_pi",
    "boundary_frames",
    "cocycle",
    "cocycle_at_frames",
    "cocycle_values",
    "coefficients_with_one",
    "default_xi_evaluator",
    "harish_chandra_xi",
    "linear_interpolation_weights",
    "make_xi_evaluator",
    "normalization_residual",
    "pairing",
    "pi_operator_matrix",
    "pi_operator_norm",
    "projective_angle",
    "weighted_half_density",
    "xi_decay_profile",
]

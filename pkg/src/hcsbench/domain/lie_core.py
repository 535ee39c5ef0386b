"""Matrix-group primitives for SL(n,ℝ).

Cartan (KAK) and Iwasawa (KAN) decompositions, the Cartan projection, the
length function L(g) = |H(g)| and root-system data. The norm on the Cartan
subalgebra is the Euclidean norm on log-singular-value vectors, which is the
Killing norm divided by √(2n).

Every scalar operation has a stacked counterpart (``*_batch``) working on
arrays of shape ``(N, n, n)``; the discrete-group and boundary modules use
those for whole balls and grids at once.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from functools import lru_cache
from typing import TYPE_CHECKING

import numpy as np
import numpy.typing as npt
from scipy.stats import special_ortho_group

from .errors import (
    ChamberViolationError,
    DeterminantDriftError,
    DimensionMismatchError,
    MatrixLiteralError,
    NonFiniteError,
    OrthogonalityDriftError,
)
from .tolerances import DEFAULT_TOLERANCES

if TYPE_CHECKING:
    from collections.abc import Sequence

FloatArray = npt.NDArray[np.float64]

logger = logging.getLogger(__name__)

#: Factor relating the Killing norm on sl(n) to the Euclidean norm used here.
KILLING_SCALE_NOTE = "L is the Euclidean norm of log-singular values; Killing norm = sqrt(2n) * L"


def _frozen(array: npt.ArrayLike) -> FloatArray:
    values = np.array(array, dtype=np.float64, copy=True)
    values.setflags(write=False)
    return values


@dataclass(frozen=True, eq=False)
class GroupElement:
    """An n×n real matrix of determinant 1.

    The determinant check is relative: |det g − 1| ≤ tol·max(1, ‖g‖₂)ⁿ,
    since rounding in det grows with the n-th power of the entry scale.

    Attributes:
        entries: Read-only matrix entries.
        orthogonal: True for elements of K = SO(n); orthogonality is then
            validated as well.

    Example:
        >>> g = GroupElement.from_literal("2,1;1,1")
        >>> g.dim
        2
        >>> (g @ g.inverse()).entries.round(12).tolist()
        [[1.0, 0.0], [0.0, 1.0]]
    """

    entries: FloatArray
    orthogonal: bool = False
    tolerance: float = field(default=DEFAULT_TOLERANCES.determinant, repr=False)

    def __post_init__(self) -> None:
        entries = _frozen(self.entries)
        object.__setattr__(self, "entries", entries)
        if entries.ndim != 2 or entries.shape[0] != entries.shape[1]:  # noqa: PLR2004
            raise DimensionMismatchError(expected=entries.shape[0] if entries.ndim else 0, actual=entries.shape[-1])
        if entries.shape[0] < 2:  # noqa: PLR2004
            raise DimensionMismatchError(expected=2, actual=entries.shape[0])
        if not np.all(np.isfinite(entries)):
            raise NonFiniteError("group element entries")
        n = entries.shape[0]
        det = float(np.linalg.det(entries))
        scale = max(1.0, float(np.linalg.norm(entries, 2))) ** n
        if not abs(det - 1.0) <= self.tolerance * scale:
            raise DeterminantDriftError(determinant=det, tolerance=self.tolerance * scale)
        if self.orthogonal:
            drift = float(np.linalg.norm(entries.T @ entries - np.eye(n)))
            if drift > DEFAULT_TOLERANCES.orthogonality:
                raise OrthogonalityDriftError(drift=drift, tolerance=DEFAULT_TOLERANCES.orthogonality)

    @classmethod
    def from_literal(cls, literal: str) -> GroupElement:
        return cls(parse_matrix_literal(literal))

    @classmethod
    def identity(cls, n: int) -> GroupElement:
        return cls(np.eye(n), orthogonal=True)

    @property
    def dim(self) -> int:
        return int(self.entries.shape[0])

    def inverse(self) -> GroupElement:
        return GroupElement(np.linalg.inv(self.entries), orthogonal=self.orthogonal, tolerance=self.tolerance)

    def __matmul__(self, other: GroupElement) -> GroupElement:
        if other.dim != self.dim:
            raise DimensionMismatchError(expected=self.dim, actual=other.dim)
        return GroupElement(
            self.entries @ other.entries,
            orthogonal=self.orthogonal and other.orthogonal,
            tolerance=max(self.tolerance, other.tolerance),
        )


@dataclass(frozen=True, eq=False)
class ChamberVector:
    """Point of the closed positive Weyl chamber.

    Example:
        >>> ChamberVector([1.0, 0.0, -1.0]).norm == 2 ** 0.5
        True
    """

    values: FloatArray

    def __post_init__(self) -> None:
        values = _frozen(self.values)
        object.__setattr__(self, "values", values)
        if values.ndim != 1 or values.size < 2:  # noqa: PLR2004
            raise DimensionMismatchError(expected=2, actual=int(values.size))
        if not np.all(np.isfinite(values)):
            raise NonFiniteError("chamber vector")
        tol = DEFAULT_TOLERANCES.chamber_sum
        if np.any(np.diff(values) > tol):
            raise ChamberViolationError(values.tolist(), "be sorted non-increasing")
        if abs(float(values.sum())) > tol * max(1.0, float(np.abs(values).max())):
            raise ChamberViolationError(values.tolist(), "sum to zero")

    @property
    def dim(self) -> int:
        return int(self.values.size)

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.values))

    def exp(self) -> GroupElement:
        """The diagonal group element exp(diag(h))."""
        return GroupElement(np.diag(np.exp(self.values)))


@dataclass(frozen=True, eq=False)
class CartanTriple:
    """Factorization g = k1·exp(diag(h))·k2 with k1, k2 ∈ SO(n)."""

    k1: GroupElement
    h: ChamberVector
    k2: GroupElement

    def reconstruct(self) -> FloatArray:
        return self.k1.entries @ np.diag(np.exp(self.h.values)) @ self.k2.entries


@dataclass(frozen=True)
class RootSystemData:
    """Restricted root system of SL(n,ℝ) (split, every multiplicity 1).

    Example:
        >>> roots = root_system(3)
        >>> roots.dim_a, roots.r, roots.rho.tolist()
        (2, 3, [1.0, 0.0, -1.0])
        >>> roots.minimal_d
        4.0
    """

    n: int
    dim_a: int
    positive_roots: tuple[tuple[int, int], ...]
    rho: FloatArray
    r: int

    @property
    def minimal_d(self) -> float:
        """Infimum of admissible decay exponents, (dim_a + 2r)/2."""
        return (self.dim_a + 2 * self.r) / 2.0

    def is_admissible(self, d: float) -> bool:
        return 2.0 * d > self.dim_a + 2 * self.r

    def root_values(self, h: npt.ArrayLike) -> FloatArray:
        """α(H) = h_i − h_j for every positive root, along the last axis."""
        values = np.asarray(h, dtype=np.float64)
        i_idx = np.array([i for i, _ in self.positive_roots])
        j_idx = np.array([j for _, j in self.positive_roots])
        return values[..., i_idx] - values[..., j_idx]


@lru_cache(maxsize=8)
def root_system(n: int) -> RootSystemData:
    """Root data for sl(n,ℝ): ρ_i = (n+1−2i)/2, roots e_i − e_j for i < j."""
    if n < 2:  # noqa: PLR2004
        raise DimensionMismatchError(expected=2, actual=n)
    positive = tuple((i, j) for i in range(n) for j in range(i + 1, n))
    rho = _frozen([(n + 1 - 2 * (i + 1)) / 2.0 for i in range(n)])
    return RootSystemData(n=n, dim_a=n - 1, positive_roots=positive, rho=rho, r=len(positive))


def parse_matrix_literal(literal: str) -> FloatArray:
    """Parse ``"a,b;c,d"`` (rows by ';', entries by ',') into a square matrix.

    Example:
        >>> parse_matrix_literal("2,1;1,1").tolist()
        [[2.0, 1.0], [1.0, 1.0]]
        >>> parse_matrix_literal("1,2;3")
        Traceback (most recent call last):
        ...
        hcsbench.domain.errors.MatrixLiteralError: matrix literal '1,2;3' is not square
    """
    rows = [row.strip() for row in literal.strip().split(";") if row.strip()]
    try:
        matrix = [[float(entry) for entry in row.split(",")] for row in rows]
    except ValueError as exc:
        raise MatrixLiteralError(f"matrix literal {literal!r} has a non-numeric entry") from exc
    if not matrix or any(len(row) != len(matrix) for row in matrix):
        raise MatrixLiteralError(f"matrix literal {literal!r} is not square")
    return np.array(matrix, dtype=np.float64)


def format_matrix_literal(entries: npt.ArrayLike) -> str:
    """Inverse of :func:`parse_matrix_literal` using ``repr``-exact floats."""
    matrix = np.asarray(entries)
    return ";".join(",".join(format(float(x), "g") if float(x).is_integer() else repr(float(x)) for x in row) for row in matrix)


# ---------------------------------------------------------------------------
# Stacked primitives
# ---------------------------------------------------------------------------


def _as_stack(stack: npt.ArrayLike) -> FloatArray:
    values = np.asarray(stack, dtype=np.float64)
    if values.ndim == 2:  # noqa: PLR2004
        values = values[np.newaxis]
    if not np.all(np.isfinite(values)):
        raise NonFiniteError("matrix stack")
    return values


def svd_so(stack: npt.ArrayLike) -> tuple[FloatArray, FloatArray, FloatArray]:
    """SVD with both orthogonal factors forced into SO(n).

    Negates the last column of U and the last row of Vᵀ where det U < 0;
    the product is unchanged because both sign flips hit the same singular
    value.
    """
    u, s, vh = np.linalg.svd(_as_stack(stack))
    flip = np.linalg.det(u) < 0
    u[flip, :, -1] *= -1.0
    vh[flip, -1, :] *= -1.0
    return u, s, vh


def cartan_projection_batch(stack: npt.ArrayLike) -> FloatArray:
    """Descending log-singular values, projected onto Σ h_i = 0."""
    singular = np.linalg.svd(_as_stack(stack), compute_uv=False)
    logs = np.log(singular)
    return logs - logs.mean(axis=-1, keepdims=True)


def length_batch(stack: npt.ArrayLike) -> FloatArray:
    return np.linalg.norm(cartan_projection_batch(stack), axis=-1)


def iwasawa_batch(stack: npt.ArrayLike) -> tuple[FloatArray, FloatArray]:
    """Orthogonal–triangular factors with positive diagonal.

    Returns:
        ``(k, log_diag)``: the orthogonal factor of each matrix (in SO(n)
        whenever det > 0) and the log of the triangular diagonal.
    """
    q, r = np.linalg.qr(_as_stack(stack))
    diag = np.diagonal(r, axis1=-2, axis2=-1)
    signs = np.where(diag < 0, -1.0, 1.0)
    k = q * signs[..., np.newaxis, :]
    return k, np.log(np.abs(diag))


# ---------------------------------------------------------------------------
# Public scalar operations
# ---------------------------------------------------------------------------


def cartan_decompose(g: GroupElement) -> CartanTriple:
    """KAK decomposition via singular value decomposition.

    Example:
        >>> triple = cartan_decompose(GroupElement.from_literal("2,1;1,1"))
        >>> triple.h.values.round(4).tolist()
        [0.9624, -0.9624]
    """
    u, s, vh = svd_so(g.entries)
    logs = np.log(s[0])
    h = ChamberVector(logs - logs.mean())
    return CartanTriple(
        k1=GroupElement(u[0], orthogonal=True),
        h=h,
        k2=GroupElement(vh[0], orthogonal=True),
    )


def length(g: GroupElement) -> float:
    """L(g) = |H(g)|, the Euclidean norm of the Cartan projection.

    Example:
        >>> round(length(GroupElement.from_literal("2,1;1,1")), 4)
        1.3611
        >>> length(GroupElement.identity(3))
        0.0
    """
    return float(length_batch(g.entries)[0])


def iwasawa_projection(g: GroupElement) -> FloatArray:
    """Log-diagonal of the triangular factor in g = k·r.

    Example:
        >>> iwasawa_projection(GroupElement.from_literal("1,5;0,1")).tolist()
        [0.0, 0.0]
    """
    _, logs = iwasawa_batch(g.entries)
    result = logs[0]
    return result - result.mean()


def rho_pairing(h: ChamberVector | npt.ArrayLike, roots: RootSystemData) -> float:
    """ρ(H) = Σ ρ_i h_i.

    Example:
        >>> rho_pairing([1.0, 0.0, -1.0], root_system(3))
        2.0
    """
    values = h.values if isinstance(h, ChamberVector) else np.asarray(h, dtype=np.float64)
    if values.shape[-1] != roots.n:
        raise DimensionMismatchError(expected=roots.n, actual=int(values.shape[-1]))
    return float(values @ roots.rho)


def subadditivity_check(g1: GroupElement, g2: GroupElement) -> float:
    """Slack L(g1) + L(g2) − L(g1·g2); nonnegative up to roundoff."""
    if g1.dim != g2.dim:
        raise DimensionMismatchError(expected=g1.dim, actual=g2.dim)
    lengths = length_batch(np.stack([g1.entries, g2.entries, g1.entries @ g2.entries]))
    return float(lengths[0] + lengths[1] - lengths[2])


# ---------------------------------------------------------------------------
# Sampling helpers
# ---------------------------------------------------------------------------


def random_orthogonal(rng: np.random.Generator, n: int, size: int | None = None) -> FloatArray:
    """Haar-random element(s) of SO(n)."""
    return np.asarray(special_ortho_group.rvs(dim=n, size=size or 1, random_state=rng), dtype=np.float64)


def random_chamber_vectors(rng: np.random.Generator, n: int, size: int, max_norm: float) -> FloatArray:
    """Chamber vectors with direction uniform on the sphere and |H| uniform on [0, max_norm]."""
    raw = rng.standard_normal((size, n))
    raw -= raw.mean(axis=1, keepdims=True)
    raw = -np.sort(-raw, axis=1)
    norms = np.linalg.norm(raw, axis=1, keepdims=True)
    norms[norms == 0] = 1.0
    return raw / norms * rng.uniform(0.0, max_norm, size=(size, 1))


def random_group_stack(rng: np.random.Generator, n: int, size: int, max_log: float) -> FloatArray:
    """Stack of k·exp(H)·k′ with Haar-random k, k′ and |H| ≤ max_log."""
    k1 = random_orthogonal(rng, n, size).reshape(size, n, n)
    k2 = random_orthogonal(rng, n, size).reshape(size, n, n)
    h = random_chamber_vectors(rng, n, size, max_log)
    return k1 @ (np.exp(h)[:, :, np.newaxis] * k2)


def random_group_element(rng: np.random.Generator, n: int, max_log: float = 3.0) -> GroupElement:
    return GroupElement(random_group_stack(rng, n, 1, max_log)[0])


def stack_elements(elements: Sequence[GroupElement]) -> FloatArray:
    if not elements:
        raise ValueError("empty element sequence")
    dims = {g.dim for g in elements}
    if len(dims) != 1:
        raise DimensionMismatchError(expected=elements[0].dim, actual=max(dims))
    return np.stack([g.entries for g in elements])


__all__ = [
    "KILLING_SCALE_NOTE",
    "CartanTriple",
    "ChamberVector",
    "FloatArray",
    "GroupElement",
    "RootSystemData",
    "cartan_decompose",
    "cartan_projection_batch",
    "format_matrix_literal",
    "iwasawa_batch",
    "iwasawa_projection",
    "length",
    "length_batch",
    "parse_matrix_literal",
    "random_chamber_vectors",
    "random_group_element",
    "random_group_stack",
    "random_orthogonal",
    "rho_pairing",
    "root_system",
    "stack_elements",
    "subadditivity_check",
    "svd_so",
]

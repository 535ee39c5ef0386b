"""Integration on SL(n,ℝ) in Cartan coordinates.

Haar measure disintegrates as dg = dk·J(H)·dH·dk′ with
J(H) = Π_{α>0} sinh(α(H)) (split group, multiplicities 1). This module
provides the density, quadrature over the positive chamber and over
K = SO(n), bi-K-invariant integrals and the constant

    𝒞_d = ∫_{𝔞⁺} Ξ²(e^H) (1+|H|)^{−2d} J(H) dH,

finite exactly when 2d > dim 𝔞 + 2r.

Chamber quadrature: the chamber is cut into radial shells whose outer
radii grow geometrically up to the cutoff; each shell carries a
Gauss–Legendre rule in |H| and, for rank 2, a Gauss–Legendre rule in the
angle across the 60° chamber. Quadrature specs are serialized into reports
as ``{cutoff, shells, nodes_per_shell, k_resolution}``.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Any, Literal, Protocol

import numpy as np
import numpy.typing as npt
from numpy.polynomial.legendre import leggauss
from scipy.special import gamma as gamma_fn

from .errors import (
    DivergentExponentError,
    NonFiniteError,
    NumericOverflowError,
    UnsupportedDimensionError,
)
from .lie_core import ChamberVector, FloatArray, GroupElement, RootSystemData, root_system
from .parallel import SEQUENTIAL, ParallelContext
from .tolerances import DEFAULT_TOLERANCES

logger = logging.getLogger(__name__)

#: α(H) beyond which exp overflows double precision.
OVERFLOW_GUARD = 700.0

SUPPORTED_K_DIMENSIONS = (2, 3)

KKind = Literal["circle", "projective", "euler"]


class XiEvaluator(Protocol):
    """Anything that evaluates the Harish-Chandra function Ξ.

    ``__call__`` takes a stack of group elements ``(N, n, n)``;
    ``at_chamber`` takes chamber coordinates ``(N, n)`` and evaluates
    Ξ(exp H).
    """

    n: int

    def __call__(self, stack: npt.ArrayLike) -> FloatArray: ...

    def at_chamber(self, h: npt.ArrayLike) -> FloatArray: ...


class RadialFunction(Protocol):
    """Vectorized function of chamber coordinates ``(N, n) -> (N,)``."""

    def __call__(self, h: FloatArray) -> npt.NDArray[Any]: ...


# ---------------------------------------------------------------------------
# K quadrature
# ---------------------------------------------------------------------------


def rotation_stack(theta: npt.ArrayLike) -> FloatArray:
    """Rotations k_θ with first column (cos θ, sin θ)."""
    angles = np.asarray(theta, dtype=np.float64)
    c, s = np.cos(angles), np.sin(angles)
    return np.stack([np.stack([c, -s], axis=-1), np.stack([s, c], axis=-1)], axis=-2)


def euler_zyz_stack(alpha: npt.ArrayLike, beta: npt.ArrayLike, gamma: npt.ArrayLike) -> FloatArray:
    """Rz(α)·Ry(β)·Rz(γ) for broadcast angle arrays."""
    a, b, g = (np.asarray(x, dtype=np.float64) for x in (alpha, beta, gamma))
    ca, sa, cb, sb, cg, sg = np.cos(a), np.sin(a), np.cos(b), np.sin(b), np.cos(g), np.sin(g)
    rows = [
        [ca * cb * cg - sa * sg, -ca * cb * sg - sa * cg, ca * sb],
        [sa * cb * cg + ca * sg, -sa * cb * sg + ca * cg, sa * sb],
        [-sb * cg, sb * sg, cb],
    ]
    return np.stack([np.stack(row, axis=-1) for row in rows], axis=-2)


@dataclass(frozen=True, eq=False)
class KQuadrature:
    """Quadrature for the normalized Haar measure on K (or on K/M).

    Attributes:
        n: Ambient dimension.
        resolution: Points per angle.
        kind: ``circle`` (θ ∈ [0, 2π)), ``projective`` (θ ∈ [0, π), the
            boundary of SL(2,ℝ)) or ``euler`` (ZYZ grid on SO(3)).
        nodes: Orthogonal matrices, shape ``(N, n, n)``.
        weights: Positive weights summing to 1.
        angles: Grid parameters, ``(N,)`` or ``(N, 3)``.

    Example:
        >>> quad = build_k_quadrature(2, 8)
        >>> len(quad), float(quad.weights.sum())
        (8, 1.0)
    """

    n: int
    resolution: int
    kind: KKind
    nodes: FloatArray
    weights: FloatArray
    angles: FloatArray

    def __post_init__(self) -> None:
        for name in ("nodes", "weights", "angles"):
            values = np.array(getattr(self, name), dtype=np.float64, copy=True)
            values.setflags(write=False)
            object.__setattr__(self, name, values)
        if abs(float(self.weights.sum()) - 1.0) > DEFAULT_TOLERANCES.weight_sum:
            raise ValueError(f"K quadrature weights sum to {float(self.weights.sum())!r}")
        if np.any(self.weights <= 0):
            raise ValueError("K quadrature weights must be positive")
        gram = np.swapaxes(self.nodes, -1, -2) @ self.nodes
        if float(np.abs(gram - np.eye(self.n)).max()) > DEFAULT_TOLERANCES.orthogonality:
            raise ValueError("K quadrature nodes are not orthogonal")

    def __len__(self) -> int:
        return int(self.weights.size)

    def elements(self) -> list[GroupElement]:
        return [GroupElement(node, orthogonal=True) for node in self.nodes]

    def integrate(self, values: npt.ArrayLike, ctx: ParallelContext = SEQUENTIAL) -> complex | float:
        samples = np.asarray(values)
        if np.iscomplexobj(samples):
            return complex(ctx.reduce_sum(self.weights * samples.real), ctx.reduce_sum(self.weights * samples.imag))
        return ctx.reduce_sum(self.weights * samples)

    def describe(self) -> dict[str, Any]:
        return {"n": self.n, "kind": self.kind, "k_resolution": self.resolution, "size": len(self)}

    def compatible(self, other: KQuadrature) -> bool:
        return self is other or (
            self.n == other.n and self.kind == other.kind and self.resolution == other.resolution
        )


def _euler_grid(resolution: int) -> KQuadrature:
    """ZYZ product grid: uniform α and γ, Gauss–Legendre in cos β.

    Integrates every matrix coefficient of SO(3) of degree below
    ``resolution`` exactly.
    """
    alpha = 2.0 * np.pi * np.arange(resolution) / resolution
    cos_beta, beta_weights = leggauss(resolution)
    beta = np.arccos(cos_beta)
    gamma = 2.0 * np.pi * np.arange(resolution) / resolution
    a, b, g = np.meshgrid(alpha, beta, gamma, indexing="ij")
    weights = np.broadcast_to(beta_weights[np.newaxis, :, np.newaxis], a.shape).ravel()
    weights = weights / weights.sum()
    nodes = euler_zyz_stack(a.ravel(), b.ravel(), g.ravel())
    angles = np.stack([a.ravel(), b.ravel(), g.ravel()], axis=-1)
    return KQuadrature(n=3, resolution=resolution, kind="euler", nodes=nodes, weights=weights, angles=angles)


def _check_k_request(n: int, resolution: int) -> None:
    if n not in SUPPORTED_K_DIMENSIONS:
        raise UnsupportedDimensionError(n, SUPPORTED_K_DIMENSIONS)
    if resolution < 4:  # noqa: PLR2004
        raise ValueError(f"K quadrature resolution must be >= 4, got {resolution}")


def build_k_quadrature(n: int, resolution: int) -> KQuadrature:
    """Normalized Haar quadrature on SO(2) (uniform angles) or SO(3) (Euler grid)."""
    _check_k_request(n, resolution)
    if n == 3:  # noqa: PLR2004
        return _euler_grid(resolution)
    theta = 2.0 * np.pi * np.arange(resolution) / resolution
    weights = np.full(resolution, 1.0 / resolution)
    return KQuadrature(n=2, resolution=resolution, kind="circle", nodes=rotation_stack(theta), weights=weights, angles=theta)


def build_boundary_quadrature(n: int, resolution: int) -> KQuadrature:
    """Grid on the Furstenberg boundary K/M with the K-invariant probability ν.

    n=2: the projective line, θ ∈ [0, π) uniform. n=3: the SO(3) Euler grid;
    the quotient by M is handled by using M-invariant test functions.
    """
    _check_k_request(n, resolution)
    if n == 3:  # noqa: PLR2004
        return _euler_grid(resolution)
    theta = np.pi * np.arange(resolution) / resolution
    weights = np.full(resolution, 1.0 / resolution)
    return KQuadrature(
        n=2, resolution=resolution, kind="projective", nodes=rotation_stack(theta), weights=weights, angles=theta
    )


# ---------------------------------------------------------------------------
# Chamber quadrature
# ---------------------------------------------------------------------------


def chamber_frame(n: int) -> FloatArray:
    """Orthonormal frame of 𝔞 adapted to the chamber walls.

    Rank 1: the single direction (1, −1)/√2. Rank 2: the wall direction
    (2, −1, −1)/√6 and its unit normal (0, 1, −1)/√2 inside 𝔞; the chamber
    is the 60° sector between (2, −1, −1)/√6 and (1, 1, −2)/√6.
    """
    if n == 2:  # noqa: PLR2004
        return np.array([[1.0, -1.0]]) / math.sqrt(2.0)
    if n == 3:  # noqa: PLR2004
        return np.array([[2.0, -1.0, -1.0], [0.0, math.sqrt(3.0), -math.sqrt(3.0)]]) / math.sqrt(6.0)
    raise UnsupportedDimensionError(n, SUPPORTED_K_DIMENSIONS)


def chamber_sphere_fraction(dim_a: int, n: int) -> float:
    """Surface measure of the unit sphere in 𝔞 that lies in the chamber."""
    sphere = 2.0 * math.pi ** (dim_a / 2.0) / float(gamma_fn(dim_a / 2.0))
    return sphere / math.factorial(n)


@dataclass(frozen=True, eq=False)
class ChamberQuadrature:
    """Nodes and Lebesgue weights on the positive chamber up to a cutoff.

    Attributes:
        n: Ambient dimension.
        nodes: Chamber coordinates, shape ``(Q, n)``.
        weights: Positive weights (Lebesgue measure on 𝔞⁺).
        cutoff: Largest |H| covered.
        shell_of_node: Shell index of each node; the last shell is the tail
            indicator.
        shell_edges: Radii delimiting the shells.
        nodes_per_shell: Radial Gauss points per shell.
        angular_nodes: Angular Gauss points (rank 2 only, else 1).
    """

    n: int
    nodes: FloatArray
    weights: FloatArray
    cutoff: float
    shell_of_node: npt.NDArray[np.int64]
    shell_edges: FloatArray
    nodes_per_shell: int
    angular_nodes: int = 1
    radii: FloatArray = field(init=False, repr=False)

    def __post_init__(self) -> None:
        for name in ("nodes", "weights", "shell_edges"):
            values = np.array(getattr(self, name), dtype=np.float64, copy=True)
            values.setflags(write=False)
            object.__setattr__(self, name, values)
        if np.any(self.weights <= 0):
            raise ValueError("chamber weights must be positive")
        tol = DEFAULT_TOLERANCES.chamber_sum
        if np.any(np.diff(self.nodes, axis=1) > tol) or np.any(np.abs(self.nodes.sum(axis=1)) > tol):
            raise ValueError("chamber nodes must be sorted and traceless")
        radii = np.linalg.norm(self.nodes, axis=1)
        radii.setflags(write=False)
        object.__setattr__(self, "radii", radii)

    def __len__(self) -> int:
        return int(self.weights.size)

    @property
    def shells(self) -> int:
        return int(self.shell_edges.size - 1)

    def chamber_vectors(self) -> list[ChamberVector]:
        return [ChamberVector(node) for node in self.nodes]

    def describe(self) -> dict[str, Any]:
        return {
            "cutoff": self.cutoff,
            "shells": self.shells,
            "nodes_per_shell": self.nodes_per_shell,
            "angular_nodes": self.angular_nodes,
            "size": len(self),
        }


def build_chamber_quadrature(
    n: int,
    cutoff: float,
    *,
    shells: int = 32,
    nodes_per_shell: int = 10,
    angular_nodes: int = 24,
    first_shell: float = 0.25,
) -> ChamberQuadrature:
    """Geometric shells in |H| with Gauss–Legendre nodes per shell.

    Example:
        >>> quad = build_chamber_quadrature(2, 10.0, shells=8, nodes_per_shell=4)
        >>> len(quad), round(float(quad.weights.sum()), 12)
        (32, 10.0)
    """
    if cutoff <= 0:
        raise ValueError(f"chamber cutoff must be positive, got {cutoff}")
    frame = chamber_frame(n)
    first = min(first_shell, cutoff / shells)
    edges = np.concatenate([[0.0], np.geomspace(first, cutoff, shells)])
    x, w = leggauss(nodes_per_shell)
    lo, hi = edges[:-1, np.newaxis], edges[1:, np.newaxis]
    radii = (0.5 * (hi - lo) * x + 0.5 * (hi + lo)).ravel()
    radial_w = (0.5 * (hi - lo) * w).ravel()
    shell_index = np.repeat(np.arange(shells), nodes_per_shell)
    if n == 2:  # noqa: PLR2004
        nodes = radii[:, np.newaxis] * frame[0]
        return ChamberQuadrature(
            n=2,
            nodes=nodes,
            weights=radial_w,
            cutoff=float(cutoff),
            shell_of_node=shell_index,
            shell_edges=edges,
            nodes_per_shell=nodes_per_shell,
        )
    xa, wa = leggauss(angular_nodes)
    phi = (math.pi / 6.0) * (xa + 1.0)
    phi_w = (math.pi / 6.0) * wa
    directions = np.cos(phi)[:, np.newaxis] * frame[0] + np.sin(phi)[:, np.newaxis] * frame[1]
    nodes = (radii[:, np.newaxis, np.newaxis] * directions[np.newaxis]).reshape(-1, n)
    weights = (radial_w[:, np.newaxis] * radii[:, np.newaxis] * phi_w[np.newaxis]).ravel()
    nodes = -np.sort(-nodes, axis=1)
    nodes -= nodes.mean(axis=1, keepdims=True)
    return ChamberQuadrature(
        n=3,
        nodes=nodes,
        weights=weights,
        cutoff=float(cutoff),
        shell_of_node=np.repeat(shell_index, angular_nodes),
        shell_edges=edges,
        nodes_per_shell=nodes_per_shell,
        angular_nodes=angular_nodes,
    )


# ---------------------------------------------------------------------------
# Density and integrals
# ---------------------------------------------------------------------------


def cartan_density_batch(h: npt.ArrayLike, roots: RootSystemData) -> FloatArray:
    """J(H) for a stack of chamber coordinates."""
    alphas = roots.root_values(h)
    peak = float(np.max(alphas)) if alphas.size else 0.0
    if peak > OVERFLOW_GUARD:
        raise NumericOverflowError(peak, OVERFLOW_GUARD)
    return np.prod(np.sinh(alphas), axis=-1)


def cartan_density(h: ChamberVector, roots: RootSystemData) -> float:
    """J(H) = Π_{α>0} sinh(α(H)).

    Example:
        >>> round(cartan_density(ChamberVector([0.5, -0.5]), root_system(2)), 4)
        1.1752
        >>> round(cartan_density(ChamberVector([1.0, 0.0, -1.0]), root_system(3)), 3)
        5.009
    """
    return float(cartan_density_batch(h.values, roots))


@dataclass(frozen=True, slots=True)
class ChamberIntegral:
    """Value of a chamber integral plus the contribution of its last shell."""

    value: float
    last_shell: float


def integrate_bi_k_invariant(
    f: RadialFunction,
    quad: ChamberQuadrature,
    roots: RootSystemData | None = None,
    ctx: ParallelContext = SEQUENTIAL,
) -> ChamberIntegral:
    """∫_{𝔞⁺} f(e^H) J(H) dH up to the quadrature cutoff."""
    roots = roots or root_system(quad.n)
    values = np.asarray(f(np.asarray(quad.nodes)), dtype=np.float64)
    if values.shape != quad.weights.shape or not np.all(np.isfinite(values)):
        raise NonFiniteError("integrand on chamber nodes")
    terms = quad.weights * values * cartan_density_batch(quad.nodes, roots)
    last = quad.shell_of_node == quad.shells - 1
    return ChamberIntegral(value=ctx.reduce_sum(terms), last_shell=ctx.reduce_sum(terms[last]))


def fit_decay_constant(xi_values: FloatArray, quad: ChamberQuadrature, roots: RootSystemData) -> float:
    """sup over the nodes of Ξ(e^H)·e^{ρ(H)}·(1+|H|)^{−r}."""
    rho_h = quad.nodes @ roots.rho
    return float(np.max(xi_values * np.exp(rho_h) * (1.0 + quad.radii) ** (-roots.r)))


@dataclass(frozen=True, slots=True)
class CdConstant:
    """Truncated 𝒞_d with an analytic tail bound.

    Attributes:
        value: Quadrature value up to the cutoff.
        tail_bound: Bound on the remainder beyond the cutoff.
        decay_constant: Fitted C in Ξ(e^H) ≤ C e^{−ρ(H)} (1+|H|)^r.
        last_shell: Contribution of the outermost shell.
        d: Decay exponent.
        cutoff: Quadrature cutoff.
    """

    value: float
    tail_bound: float
    decay_constant: float
    last_shell: float
    d: float
    cutoff: float


def check_admissible(d: float, roots: RootSystemData) -> None:
    if not roots.is_admissible(d):
        raise DivergentExponentError(d=d, minimal_d=roots.minimal_d)


def cd_tail_bound(d: float, cutoff: float, decay_constant: float, roots: RootSystemData) -> float:
    """Remainder of 𝒞_d beyond |H| = c.

    With Ξ ≤ C e^{−ρ}(1+|H|)^r and sinh x ≤ eˣ/2 the integrand is at most
    C²·2^{−r}·(1+|H|)^{2r−2d}. Integrating over the chamber part of
    {|H| > c} in polar coordinates gives
    ω·C²·2^{−r}·(1+c)^{−κ}/κ with κ = 2d − 2r − dim 𝔞 and ω the chamber
    fraction of the unit sphere.
    """
    kappa = 2.0 * d - 2.0 * roots.r - roots.dim_a
    omega = chamber_sphere_fraction(roots.dim_a, roots.n)
    return omega * decay_constant**2 * 2.0 ** (-roots.r) * (1.0 + cutoff) ** (-kappa) / kappa


def cd_constant(
    d: float,
    quad: ChamberQuadrature,
    xi: XiEvaluator,
    roots: RootSystemData | None = None,
    ctx: ParallelContext = SEQUENTIAL,
) -> CdConstant:
    """𝒞_d = ∫ Ξ²(e^H)(1+|H|)^{−2d} J(H) dH, truncated, with tail bound."""
    roots = roots or root_system(quad.n)
    check_admissible(d, roots)
    xi_values = np.asarray(xi.at_chamber(quad.nodes), dtype=np.float64)
    radii = quad.radii

    def integrand(_: FloatArray) -> FloatArray:
        return xi_values**2 * (1.0 + radii) ** (-2.0 * d)

    integral = integrate_bi_k_invariant(integrand, quad, roots, ctx)
    decay = fit_decay_constant(xi_values, quad, roots)
    result = CdConstant(
        value=integral.value,
        tail_bound=cd_tail_bound(d, quad.cutoff, decay, roots),
        decay_constant=decay,
        last_shell=integral.last_shell,
        d=d,
        cutoff=quad.cutoff,
    )
    logger.debug(
        "cd_constant computed",
        extra={"d": d, "cutoff": quad.cutoff, "value": result.value, "tail_bound": result.tail_bound},
    )
    return result


def sobolev_norm_on_group(f: RadialFunction, d: float, quad: ChamberQuadrature, roots: RootSystemData | None = None) -> float:
    """‖f‖_{H^d(G)} for a bi-K-invariant f: (∫ |f|²(1+|H|)^{2d} J dH)^{1/2}."""
    roots = roots or root_system(quad.n)
    values = np.abs(np.asarray(f(np.asarray(quad.nodes))))
    radii = quad.radii

    def integrand(_: FloatArray) -> FloatArray:
        return values**2 * (1.0 + radii) ** (2.0 * d)

    return math.sqrt(max(integrate_bi_k_invariant(integrand, quad, roots).value, 0.0))


__all__ = [
    "OVERFLOW_GUARD",
    "CdConstant",
    "ChamberIntegral",
    "ChamberQuadrature",
    "KQuadrature",
    "RadialFunction",
    "XiEvaluator",
    "build_boundary_quadrature",
    "build_chamber_quadrature",
    "build_k_quadrature",
    "cartan_density",
    "cartan_density_batch",
    "cd_constant",
    "cd_tail_bound",
    "chamber_frame",
    "chamber_sphere_fraction",
    "check_admissible",
    "euler_zyz_stack",
    "fit_decay_constant",
    "integrate_bi_k_invariant",
    "rotation_stack",
    "sobolev_norm_on_group",
]

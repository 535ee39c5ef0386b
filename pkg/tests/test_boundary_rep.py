"""Tests for the boundary cocycle, the representation pi and the function Xi."""

from __future__ import annotations

import math

import numpy as np
import pytest
from scipy.special import ellipkm1

from hcsbench.domain.boundary_rep import (
    BoundaryFunction,
    GridXi,
    HorocyclicXi,
    apply_pi,
    boundary_frames,
    cocycle,
    cocycle_at_frames,
    default_xi_evaluator,
    harish_chandra_xi,
    linear_interpolation_weights,
    make_xi_evaluator,
    normalization_residual,
    pairing,
    pi_operator_matrix,
    pi_operator_norm,
    xi_decay_profile,
)
from hcsbench.domain.discrete_group import BallIndex, GroupFunction
from hcsbench.domain.enums import XiMethod
from hcsbench.domain.errors import GridMismatchError, InterpolationOutOfRangeError, UnsupportedDimensionError
from hcsbench.domain.haar_integration import build_boundary_quadrature, build_k_quadrature
from hcsbench.domain.lie_core import ChamberVector, GroupElement, random_group_element, random_group_stack
from hcsbench.domain.reports import random_boundary_function


def _xi_closed_form(t: float) -> float:
    """(2/pi) e^{-t/2} K(1 - e^{-2t}) with K the complete elliptic integral."""
    return 2.0 / math.pi * math.exp(-t / 2.0) * float(ellipkm1(math.exp(-2.0 * t)))


def _diagonal(t: float) -> GroupElement:
    return ChamberVector([t / 2.0, -t / 2.0]).exp()


# ======================== cocycle ========================


@pytest.mark.os_agnostic
@pytest.mark.parametrize("n", [2, 3])
@pytest.mark.parametrize("method", [XiMethod.BOUNDARY, XiMethod.IWASAWA])
def test_cocycle_satisfies_the_chain_rule(n: int, method: XiMethod, rng: np.random.Generator) -> None:
    """c(gh, b) = c(g, b) c(h, g^-1 b)."""
    g = random_group_element(rng, n, max_log=1.5)
    h = random_group_element(rng, n, max_log=1.5)
    frames = build_k_quadrature(n, 6).nodes[:40] if n == 3 else build_boundary_quadrature(2, 40).nodes
    g_inv = np.linalg.inv(g.entries)
    lhs = cocycle_at_frames(np.linalg.inv((g @ h).entries)[np.newaxis], np.asarray(frames), method)[0]
    rhs = (
        cocycle_at_frames(g_inv[np.newaxis], np.asarray(frames), method)[0]
        * cocycle_at_frames(np.linalg.inv(h.entries)[np.newaxis], boundary_frames(g_inv, np.asarray(frames)), method)[0]
    )
    np.testing.assert_allclose(lhs, rhs, rtol=1e-9)


@pytest.mark.os_agnostic
def test_cocycle_backends_agree_on_sl3(rng: np.random.Generator) -> None:
    """Exterior powers and the triangular factor give the same derivative."""
    stack = random_group_stack(rng, 3, 5, 2.0)
    frames = np.asarray(build_k_quadrature(3, 4).nodes)
    exterior = cocycle_at_frames(np.linalg.inv(stack), frames, XiMethod.BOUNDARY)
    triangular = cocycle_at_frames(np.linalg.inv(stack), frames, XiMethod.IWASAWA)
    np.testing.assert_allclose(exterior, triangular, rtol=1e-9)


@pytest.mark.os_agnostic
def test_cocycle_of_rotation_is_one() -> None:
    """K preserves the invariant measure."""
    grid = build_boundary_quadrature(2, 16)
    rotation = GroupElement(np.asarray(build_k_quadrature(2, 8).nodes[3]), orthogonal=True)
    assert cocycle(rotation, grid, 5).value == pytest.approx(1.0)


@pytest.mark.os_agnostic
def test_pushforward_measure_stays_a_probability(rng: np.random.Generator) -> None:
    """sum_b w_b c(g, b) = 1 on a fine grid."""
    grid = build_boundary_quadrature(2, 1024)
    assert normalization_residual(random_group_element(rng, 2, max_log=1.0), grid) < 1e-9


@pytest.mark.os_agnostic
def test_cocycle_rejects_elements_of_the_wrong_dimension() -> None:
    """An SL(3) element has no action on the projective line."""
    with pytest.raises(GridMismatchError):
        cocycle(GroupElement.identity(3), build_boundary_quadrature(2, 16), 0)


# ======================== boundary functions ========================


@pytest.mark.os_agnostic
def test_sample_count_must_match_the_grid() -> None:
    """Three samples on a grid of eight nodes."""
    with pytest.raises(GridMismatchError):
        BoundaryFunction.from_samples(build_boundary_quadrature(2, 8), [1.0, 2.0, 3.0])


@pytest.mark.os_agnostic
def test_constant_function_norms() -> None:
    """||c||_1 = ||c||_2 = |c| for the probability measure."""
    f = BoundaryFunction.constant_function(build_boundary_quadrature(2, 32), -2.0)
    assert f.norm1 == pytest.approx(2.0)
    assert f.norm2 == pytest.approx(2.0)
    assert not f.is_nonnegative
    assert f.scaled(-0.5).constant == pytest.approx(1.0)


@pytest.mark.os_agnostic
def test_abs_squared_keeps_the_formula(rng: np.random.Generator) -> None:
    """|xi|^2 is nonnegative and still has a closed form."""
    xi = random_boundary_function(rng, build_boundary_quadrature(2, 64))
    squared = xi.abs_squared()
    assert squared.is_nonnegative
    assert squared.formula is not None
    assert squared.mean().real == pytest.approx(xi.norm2**2)


@pytest.mark.os_agnostic
def test_linear_interpolation_weights_are_convex() -> None:
    """Each row sums to one with nonnegative entries."""
    weights, columns = linear_interpolation_weights(np.linspace(0.0, 3.0 * math.pi, 50), 16)
    np.testing.assert_allclose(weights.sum(axis=1), 1.0)
    assert float(weights.min()) >= 0.0
    assert int(columns.max()) < 16


@pytest.mark.os_agnostic
def test_sampled_function_on_sl3_boundary_needs_a_formula() -> None:
    """Interpolation is only defined on the projective line."""
    grid = build_boundary_quadrature(3, 4)
    f = BoundaryFunction.from_samples(grid, np.ones(len(grid)))
    with pytest.raises(InterpolationOutOfRangeError):
        f.evaluate(np.asarray(grid.nodes))


@pytest.mark.os_agnostic
def test_pairing_requires_the_same_grid() -> None:
    """Functions on different grids do not pair."""
    one = BoundaryFunction.ones(build_boundary_quadrature(2, 16))
    other = BoundaryFunction.ones(build_boundary_quadrature(2, 32))
    with pytest.raises(GridMismatchError):
        pairing(one, other)


# ======================== representation ========================


@pytest.mark.os_agnostic
def test_pi_is_unitary_on_smooth_functions(rng: np.random.Generator) -> None:
    """||pi(g) xi||_2 = ||xi||_2 for closed-form xi on a fine grid."""
    grid = build_boundary_quadrature(2, 1024)
    xi = random_boundary_function(rng, grid)
    for _ in range(3):
        moved = apply_pi(random_group_element(rng, 2, max_log=1.0), xi)
        assert moved.norm2 == pytest.approx(xi.norm2, rel=1e-8)


@pytest.mark.os_agnostic
def test_pi_is_a_homomorphism_on_formula_functions(rng: np.random.Generator) -> None:
    """pi(g) pi(h) xi = pi(gh) xi pointwise."""
    grid = build_boundary_quadrature(2, 64)
    xi = random_boundary_function(rng, grid)
    g = random_group_element(rng, 2, max_log=1.0)
    h = random_group_element(rng, 2, max_log=1.0)
    np.testing.assert_allclose(apply_pi(g, apply_pi(h, xi)).samples, apply_pi(g @ h, xi).samples, rtol=1e-9, atol=1e-12)


@pytest.mark.os_agnostic
def test_pi_of_the_identity_is_the_identity_matrix() -> None:
    """pi(delta_e) has operator norm one."""
    grid = build_boundary_quadrature(2, 64)
    matrix = pi_operator_matrix(np.eye(2)[np.newaxis], [1.0], grid)
    np.testing.assert_allclose(matrix.toarray(), np.eye(64), atol=1e-9)


@pytest.mark.os_agnostic
def test_pi_operator_norm_of_delta_is_one(sanov_ball: BallIndex) -> None:
    """||pi(delta_e)|| = 1."""
    grid = build_boundary_quadrature(2, 96)
    assert pi_operator_norm(GroupFunction.delta(sanov_ball, 0), grid) == pytest.approx(1.0, abs=1e-9)


@pytest.mark.os_agnostic
def test_pi_operator_norm_of_zero_is_zero(sanov_ball: BallIndex) -> None:
    """Empty support gives the zero operator."""
    assert pi_operator_norm(GroupFunction.zeros(sanov_ball), build_boundary_quadrature(2, 32)) == 0.0


@pytest.mark.os_agnostic
def test_pi_operator_matrix_needs_the_projective_grid() -> None:
    """The SO(2) circle grid is not the boundary."""
    with pytest.raises(GridMismatchError):
        pi_operator_matrix(np.eye(2)[np.newaxis], [1.0], build_k_quadrature(2, 16))


# ======================== Xi ========================


@pytest.mark.os_agnostic
@pytest.mark.parametrize("t", [0.0, 0.5, 2.0, 8.0, 20.0])
def test_horocyclic_xi_matches_the_elliptic_closed_form(t: float) -> None:
    """The trapezoid rule reproduces (2/pi) e^{-t/2} K(1 - e^{-2t})."""
    assert float(HorocyclicXi().of_t(t)[0]) == pytest.approx(_xi_closed_form(t), rel=1e-9)


@pytest.mark.os_agnostic
@pytest.mark.parametrize("t", [0.5, 2.0, 4.0])
@pytest.mark.parametrize("method", ["boundary", "iwasawa"])
def test_grid_backends_agree_with_horocyclic_xi(t: float, method: str) -> None:
    """Every backend computes the same spherical function."""
    grid = build_boundary_quadrature(2, 1024)
    g = _diagonal(t)
    assert harish_chandra_xi(g, method, grid) == pytest.approx(harish_chandra_xi(g, "horocyclic"), rel=1e-8)


@pytest.mark.os_agnostic
def test_horocyclic_xi_stays_finite_for_large_t() -> None:
    """Past t = 745 the value follows (2/pi) e^{-t/2} (t + 2 log 2) instead of turning into NaN."""
    values = HorocyclicXi().of_t([0.5, 800.0, 2000.0])
    assert np.all(np.isfinite(values))
    assert float(values[0]) == pytest.approx(_xi_closed_form(0.5), rel=1e-9)
    assert float(values[1]) == pytest.approx(2.0 / math.pi * math.exp(-400.0) * (800.0 + 2.0 * math.log(2.0)), rel=1e-9)
    assert float(values[2]) == 0.0


@pytest.mark.os_agnostic
def test_xi_is_bi_k_invariant(rng: np.random.Generator) -> None:
    """Xi(k g k') = Xi(g)."""
    xi = HorocyclicXi()
    g = random_group_element(rng, 2)
    k = random_group_element(rng, 2, max_log=0.0)
    assert float(xi((k @ g).entries)[0]) == pytest.approx(float(xi(g.entries)[0]), rel=1e-10)


@pytest.mark.os_agnostic
def test_xi_is_one_at_the_identity_on_sl3() -> None:
    """Xi(e) = 1 on every grid."""
    xi = GridXi(build_boundary_quadrature(3, 6))
    assert float(xi(np.eye(3))[0]) == pytest.approx(1.0, abs=1e-12)


@pytest.mark.os_agnostic
def test_xi_stays_below_its_envelope() -> None:
    """Xi(a_t) <= e^{-t/2}(1 + t/sqrt 2) on [0, 20]."""
    values, envelope = xi_decay_profile(HorocyclicXi(), np.linspace(0.0, 20.0, 201))
    assert float(np.max(values / envelope)) <= 1.0 + 1e-9
    assert float(values[0]) == pytest.approx(1.0)


@pytest.mark.os_agnostic
def test_horocyclic_xi_is_sl2_only() -> None:
    """There is no horocyclic backend for n=3."""
    with pytest.raises(UnsupportedDimensionError):
        HorocyclicXi(n=3)


@pytest.mark.os_agnostic
def test_grid_backends_need_a_grid() -> None:
    """boundary and iwasawa integrate over a boundary grid."""
    with pytest.raises(GridMismatchError):
        make_xi_evaluator(XiMethod.IWASAWA)


@pytest.mark.os_agnostic
def test_default_evaluator_depends_on_dimension() -> None:
    """Horocyclic on SL(2), grid-based on SL(3)."""
    assert isinstance(default_xi_evaluator(2), HorocyclicXi)
    assert isinstance(default_xi_evaluator(3, build_boundary_quadrature(3, 4)), GridXi)

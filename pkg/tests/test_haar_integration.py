"""Tests for K quadratures, chamber quadratures and the constant C_d."""

from __future__ import annotations

import math

import numpy as np
import pytest

from hcsbench.domain.boundary_rep import HorocyclicXi, make_xi_evaluator
from hcsbench.domain.errors import DivergentExponentError, NonFiniteError, NumericOverflowError, UnsupportedDimensionError
from hcsbench.domain.haar_integration import (
    build_boundary_quadrature,
    build_chamber_quadrature,
    build_k_quadrature,
    cartan_density,
    cartan_density_batch,
    cd_constant,
    cd_tail_bound,
    chamber_sphere_fraction,
    check_admissible,
    integrate_bi_k_invariant,
    sobolev_norm_on_group,
)
from hcsbench.domain.lie_core import ChamberVector, root_system
from hcsbench.domain.parallel import ParallelContext

# ======================== K quadrature ========================


@pytest.mark.os_agnostic
def test_circle_quadrature_is_exact_for_low_trigonometric_degree() -> None:
    """The mean of cos^2 over SO(2) is 1/2."""
    quad = build_k_quadrature(2, 8)
    assert quad.kind == "circle"
    assert quad.integrate(np.cos(quad.angles) ** 2) == pytest.approx(0.5, abs=1e-14)


@pytest.mark.os_agnostic
def test_euler_grid_has_resolution_cubed_nodes() -> None:
    """ZYZ grid with res points per angle."""
    quad = build_k_quadrature(3, 6)
    assert len(quad) == 216
    assert float(quad.weights.sum()) == pytest.approx(1.0)
    np.testing.assert_allclose(np.linalg.det(quad.nodes), 1.0, atol=1e-12)


@pytest.mark.os_agnostic
def test_euler_grid_approximates_haar_moments() -> None:
    """The mean of k33^2 over SO(3) is 1/3."""
    quad = build_k_quadrature(3, 16)
    assert quad.integrate(quad.nodes[:, 2, 2] ** 2) == pytest.approx(1.0 / 3.0, abs=5e-3)


@pytest.mark.os_agnostic
@pytest.mark.parametrize("resolution", [4, 8, 16])
def test_euler_grid_averages_a_rotation_entry_to_zero(resolution: int) -> None:
    """The Haar mean of k11 over SO(3) vanishes on every grid."""
    quad = build_k_quadrature(3, resolution)
    assert quad.integrate(quad.nodes[:, 0, 0]) == pytest.approx(0.0, abs=1e-12)


@pytest.mark.os_agnostic
def test_euler_grid_is_exact_for_second_moments() -> None:
    """Gauss nodes in cos(beta) make the mean of k33^2 exactly 1/3."""
    quad = build_k_quadrature(3, 4)
    assert quad.integrate(quad.nodes[:, 2, 2] ** 2) == pytest.approx(1.0 / 3.0, abs=1e-12)


@pytest.mark.os_agnostic
def test_integrate_complex_values_splits_real_and_imaginary() -> None:
    """Complex samples integrate componentwise."""
    quad = build_k_quadrature(2, 16)
    value = quad.integrate(np.exp(1j * quad.angles) + 2.0)
    assert complex(value) == pytest.approx(2.0 + 0j, abs=1e-13)


@pytest.mark.os_agnostic
def test_deterministic_reduction_matches_plain_sum() -> None:
    """fsum and the pairwise sum agree to rounding."""
    quad = build_k_quadrature(2, 64)
    values = np.sin(quad.angles) ** 4
    plain = quad.integrate(values)
    ordered = quad.integrate(values, ParallelContext(workers=1, deterministic=True))
    assert ordered == pytest.approx(plain, abs=1e-15)
    assert ordered == pytest.approx(3.0 / 8.0, abs=1e-14)


@pytest.mark.os_agnostic
@pytest.mark.parametrize("n", [1, 4])
def test_when_n_is_unsupported_quadrature_raises(n: int) -> None:
    """Only SO(2) and SO(3) are tabulated."""
    with pytest.raises(UnsupportedDimensionError):
        build_k_quadrature(n, 8)


@pytest.mark.os_agnostic
def test_when_resolution_is_below_four_quadrature_raises() -> None:
    """Three points per angle are too few."""
    with pytest.raises(ValueError, match=">= 4"):
        build_boundary_quadrature(2, 3)


@pytest.mark.os_agnostic
def test_boundary_quadrature_covers_the_projective_line() -> None:
    """n=2 boundary angles lie in [0, pi)."""
    grid = build_boundary_quadrature(2, 32)
    assert grid.kind == "projective"
    assert float(grid.angles.max()) < math.pi
    assert not grid.compatible(build_k_quadrature(2, 32))
    assert grid.compatible(build_boundary_quadrature(2, 32))


# ======================== chamber quadrature ========================


@pytest.mark.os_agnostic
def test_rank_one_chamber_weights_sum_to_cutoff() -> None:
    """Lebesgue measure of [0, c] is c."""
    quad = build_chamber_quadrature(2, 12.0)
    assert float(quad.weights.sum()) == pytest.approx(12.0, rel=1e-12)
    assert float(quad.radii.max()) < 12.0


@pytest.mark.os_agnostic
def test_rank_two_chamber_weights_sum_to_sector_area() -> None:
    """The 60 degree sector of radius c has area pi c^2 / 6."""
    quad = build_chamber_quadrature(3, 5.0, shells=12, nodes_per_shell=6, angular_nodes=12)
    assert float(quad.weights.sum()) == pytest.approx(math.pi * 25.0 / 6.0, rel=1e-10)
    assert quad.shells == 12
    assert len(quad) == 12 * 6 * 12


@pytest.mark.os_agnostic
def test_rank_two_chamber_nodes_lie_in_the_chamber() -> None:
    """Every node builds a valid ChamberVector."""
    quad = build_chamber_quadrature(3, 4.0, shells=4, nodes_per_shell=3, angular_nodes=5)
    assert all(vector.norm < 4.0 for vector in quad.chamber_vectors())


@pytest.mark.os_agnostic
def test_chamber_sphere_fractions() -> None:
    """Half of S^0 and a sixth of S^1."""
    assert chamber_sphere_fraction(1, 2) == pytest.approx(1.0)
    assert chamber_sphere_fraction(2, 3) == pytest.approx(math.pi / 3.0)


@pytest.mark.os_agnostic
def test_when_cutoff_is_not_positive_chamber_quadrature_raises() -> None:
    """A zero cutoff has no nodes."""
    with pytest.raises(ValueError, match="positive"):
        build_chamber_quadrature(2, 0.0)


# ======================== density and integrals ========================


@pytest.mark.os_agnostic
def test_integral_of_one_on_sl2_has_closed_form() -> None:
    """int_0^c sinh(sqrt(2) r) dr = (cosh(sqrt(2) c) - 1)/sqrt(2)."""
    cutoff = 6.0
    quad = build_chamber_quadrature(2, cutoff)
    result = integrate_bi_k_invariant(lambda h: np.ones(h.shape[0]), quad)
    expected = (math.cosh(math.sqrt(2.0) * cutoff) - 1.0) / math.sqrt(2.0)
    assert result.value == pytest.approx(expected, rel=1e-8)
    assert 0.0 < result.last_shell < result.value


@pytest.mark.os_agnostic
def test_when_integrand_is_not_finite_integration_raises() -> None:
    """NaN integrands are rejected."""
    quad = build_chamber_quadrature(2, 2.0, shells=4, nodes_per_shell=2)
    with pytest.raises(NonFiniteError):
        integrate_bi_k_invariant(lambda h: np.full(h.shape[0], math.nan), quad)


@pytest.mark.os_agnostic
def test_density_is_positive_inside_the_chamber() -> None:
    """sinh of positive root values."""
    assert cartan_density(ChamberVector([0.3, 0.1, -0.4]), root_system(3)) > 0.0


@pytest.mark.os_agnostic
def test_density_overflow_is_guarded() -> None:
    """alpha(H) = 800 exceeds the overflow guard."""
    with pytest.raises(NumericOverflowError):
        cartan_density_batch(np.array([[400.0, -400.0]]), root_system(2))


# ======================== C_d ========================


@pytest.mark.os_agnostic
def test_when_d_is_not_admissible_cd_raises() -> None:
    """d = 1.5 is the rank-one threshold."""
    with pytest.raises(DivergentExponentError, match="need d > 1.5"):
        check_admissible(1.5, root_system(2))


@pytest.mark.os_agnostic
def test_cd_grows_with_the_cutoff() -> None:
    """A larger cutoff integrates more positive mass."""
    xi = HorocyclicXi()
    small = cd_constant(2.0, build_chamber_quadrature(2, 10.0), xi)
    large = cd_constant(2.0, build_chamber_quadrature(2, 20.0), xi)
    assert 0.0 < small.value < large.value
    assert large.tail_bound < small.tail_bound


@pytest.mark.os_agnostic
def test_cd_truncation_is_within_the_tail_bound() -> None:
    """The change from c=20 to c=40 is covered by the tail bound at 20."""
    xi = HorocyclicXi()
    mid = cd_constant(3.0, build_chamber_quadrature(2, 20.0), xi)
    far = cd_constant(3.0, build_chamber_quadrature(2, 40.0), xi)
    assert far.value - mid.value <= mid.tail_bound
    assert mid.decay_constant > 0.0


@pytest.mark.os_agnostic
def test_cd_at_d_one_raises() -> None:
    """d = 1 lies below the SL(2) threshold."""
    with pytest.raises(DivergentExponentError):
        cd_constant(1.0, build_chamber_quadrature(2, 10.0), HorocyclicXi())


@pytest.mark.os_agnostic
def test_cd_decreases_as_d_grows() -> None:
    """A larger d damps the same integrand harder."""
    xi = HorocyclicXi()
    quad = build_chamber_quadrature(2, 20.0)
    values = [cd_constant(d, quad, xi).value for d in (2.0, 3.0, 4.0)]
    assert values == sorted(values, reverse=True)
    assert values[-1] > 0.0


@pytest.mark.os_agnostic
def test_cd_at_d_three_matches_the_one_dimensional_reference() -> None:
    """Cutoff 40 reproduces the closed-form-Xi value 0.0749492 to 1e-4."""
    result = cd_constant(3.0, build_chamber_quadrature(2, 40.0), HorocyclicXi())
    assert result.value == pytest.approx(0.0749492, rel=1e-4)
    assert result.tail_bound < 1e-4


@pytest.mark.os_agnostic
def test_cd_at_d_two_misses_the_reference_by_less_than_its_tail_bound() -> None:
    """At d = 2 the (1+c)^-1 tail is slow: cutoff 40 is 2.8% low, inside the bound."""
    reference = 0.319449
    result = cd_constant(2.0, build_chamber_quadrature(2, 40.0), HorocyclicXi())
    assert result.value < reference
    assert reference - result.value <= result.tail_bound
    assert result.tail_bound > 1e-4


@pytest.mark.os_agnostic
def test_tail_bound_decreases_with_cutoff() -> None:
    """(1+c)^-kappa is decreasing."""
    roots = root_system(2)
    assert cd_tail_bound(2.0, 40.0, 1.0, roots) < cd_tail_bound(2.0, 10.0, 1.0, roots)


@pytest.mark.os_agnostic
@pytest.mark.slow
def test_cd_on_sl3_uses_the_grid_backend() -> None:
    """Rank two C_d is finite and positive for d above 4."""
    xi = make_xi_evaluator("boundary", build_boundary_quadrature(3, 6))
    quad = build_chamber_quadrature(3, 4.0, shells=6, nodes_per_shell=3, angular_nodes=6)
    result = cd_constant(5.0, quad, xi)
    assert math.isfinite(result.value)
    assert result.value > 0.0


@pytest.mark.os_agnostic
def test_sobolev_norm_of_radial_indicator() -> None:
    """||1_{|H|<1} (1+L)^d||_2 squared integrates (1+r)^{2d} sinh(sqrt(2) r)."""
    quad = build_chamber_quadrature(2, 1.0)
    value = sobolev_norm_on_group(lambda h: np.ones(h.shape[0]), 0.0, quad)
    assert value == pytest.approx(math.sqrt((math.cosh(math.sqrt(2.0)) - 1.0) / math.sqrt(2.0)), rel=1e-8)

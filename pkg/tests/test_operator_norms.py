"""Tests for adjoints, truncated convolution operators and power iteration."""

from __future__ import annotations

import math

import numpy as np
import pytest

from hcsbench.domain.discrete_group import BallIndex, GroupFunction, builtin_presentation, generate_ball
from hcsbench.domain.errors import NegativeMassError, PowerIterationStallError, TargetTooSmallError
from hcsbench.domain.operator_norms import (
    TruncatedConvolutionOperator,
    adjoint,
    check_nonnegative,
    free_group_radial_norm,
    kesten_norm,
    lambda_norm_lower,
    lambda_norm_sequence,
)


def _generator_indicator(ball: BallIndex) -> GroupFunction:
    return GroupFunction.indicator(ball, [1, 2, 3, 4])


# ======================== adjoint ========================


@pytest.mark.os_agnostic
def test_adjoint_conjugates_and_inverts(sanov_ball: BallIndex) -> None:
    """f*(g^-1) = conj(f(g))."""
    f = GroupFunction.delta(sanov_ball, 7, value=2.0 + 1.0j)
    star = adjoint(f)
    index = int(star.support_indices()[0])
    assert index == int(sanov_ball.inverse_index[7])
    assert star.value_at(index) == 2.0 - 1.0j


@pytest.mark.os_agnostic
def test_adjoint_is_an_involution(sanov_ball: BallIndex, rng: np.random.Generator) -> None:
    """f** = f."""
    values = rng.standard_normal(len(sanov_ball)) + 1j * rng.standard_normal(len(sanov_ball))
    f = GroupFunction(sanov_ball, values)
    np.testing.assert_allclose(adjoint(adjoint(f)).values, f.values)


# ======================== truncated operator ========================


@pytest.mark.os_agnostic
def test_truncation_radius_below_support_raises(sanov_ball: BallIndex) -> None:
    """R must cover the support of f."""
    with pytest.raises(TargetTooSmallError):
        TruncatedConvolutionOperator.build(GroupFunction.delta(sanov_ball, len(sanov_ball) - 1), 2)


@pytest.mark.os_agnostic
def test_operator_domain_is_the_truncation_ball(sanov_ball: BallIndex) -> None:
    """Columns are indexed by B_R; a larger R grows the ball."""
    operator = TruncatedConvolutionOperator.build(_generator_indicator(sanov_ball), 4)
    assert operator.domain_size == 2 * 3**4 - 1
    assert operator.domain_ball.radius == 4


@pytest.mark.os_agnostic
def test_gram_apply_matches_dense_product(sanov_ball: BallIndex, rng: np.random.Generator) -> None:
    """M^H M v computed sparsely."""
    operator = TruncatedConvolutionOperator.build(_generator_indicator(sanov_ball), 2)
    v = rng.standard_normal(operator.domain_size)
    dense = operator.matrix.toarray()
    np.testing.assert_allclose(operator.gram_apply(v), dense.conj().T @ (dense @ v))


# ======================== power iteration ========================


@pytest.mark.os_agnostic
def test_delta_has_norm_one(sanov_ball: BallIndex) -> None:
    """lambda(delta_g) is unitary."""
    estimate = lambda_norm_lower(GroupFunction.delta(sanov_ball, 5), 3)
    assert estimate.lower == pytest.approx(1.0, abs=1e-9)
    assert not estimate.stalled


@pytest.mark.os_agnostic
def test_zero_function_has_norm_zero(sanov_ball: BallIndex) -> None:
    """No iterations are run for the zero operator."""
    estimate = lambda_norm_lower(GroupFunction.zeros(sanov_ball), 2)
    assert estimate.lower == 0.0
    assert estimate.iterations == 0


@pytest.mark.os_agnostic
@pytest.mark.parametrize("radius", [1, 2, 3])
def test_generator_sum_matches_the_radial_free_group_value(sanov_ball: BallIndex, radius: int) -> None:
    """The Sanov subgroup is free, so the radial tridiagonal model is exact."""
    estimate = lambda_norm_lower(_generator_indicator(sanov_ball), radius)
    assert estimate.lower == pytest.approx(free_group_radial_norm(2, radius), rel=1e-6)


@pytest.mark.os_agnostic
def test_estimates_increase_with_truncation(sanov_ball: BallIndex) -> None:
    """Compressions to larger balls can only grow."""
    estimates = lambda_norm_sequence(_generator_indicator(sanov_ball), [1, 2, 3, 4])
    lowers = [e.lower for e in estimates]
    assert lowers == sorted(lowers)
    assert [e.truncation_radius for e in estimates] == [1, 2, 3, 4]
    assert lowers[-1] < kesten_norm(2)


@pytest.mark.os_agnostic
def test_strict_mode_raises_when_iterations_run_out(sanov_ball: BallIndex) -> None:
    """One iteration cannot reach a 1e-15 residual."""
    with pytest.raises(PowerIterationStallError):
        lambda_norm_lower(_generator_indicator(sanov_ball), 3, 1e-15, max_iterations=1, strict=True)


@pytest.mark.os_agnostic
def test_stalled_estimate_is_reported_without_strict(sanov_ball: BallIndex) -> None:
    """The lower bound is still returned with the stalled flag."""
    estimate = lambda_norm_lower(_generator_indicator(sanov_ball), 3, 1e-15, max_iterations=1)
    assert estimate.stalled
    assert 0.0 < estimate.lower <= free_group_radial_norm(2, 3) + 1e-12
    assert estimate.to_dict()["R"] == 3


# ======================== free group references ========================


@pytest.mark.os_agnostic
def test_free_group_radial_norm_increases_towards_kesten() -> None:
    """The compressed norms increase and stay below 2 sqrt(3)."""
    values = [free_group_radial_norm(2, r) for r in range(0, 40, 5)]
    assert values == sorted(values)
    assert values[-1] < kesten_norm(2)
    assert kesten_norm(2) - values[-1] < 0.05


@pytest.mark.os_agnostic
def test_kesten_norm_of_rank_two() -> None:
    """2 sqrt(2k - 1) with k = 2."""
    assert kesten_norm(2) == pytest.approx(2.0 * math.sqrt(3.0))


# ======================== nonnegativity ========================


@pytest.mark.os_agnostic
def test_check_nonnegative_reports_the_first_offender() -> None:
    """Negative mass names its index and value."""
    ball = generate_ball(builtin_presentation("sanov"), 1)
    f = GroupFunction(ball, np.array([1.0, 0.5, -0.25, 0.0, 0.0]))
    with pytest.raises(NegativeMassError) as info:
        check_nonnegative(f)
    assert info.value.index == 2
    assert info.value.value == -0.25


@pytest.mark.os_agnostic
def test_radius_fourteen_stays_a_visible_gap_below_kesten() -> None:
    """The compression at R = 14 sits about 0.053 below 2 sqrt(3)."""
    value = free_group_radial_norm(2, 14)
    assert value == pytest.approx(3.41114, abs=1e-4)
    assert 1e-2 < kesten_norm(2) - value < 0.06


@pytest.mark.os_agnostic
def test_kesten_gap_shrinks_as_the_truncation_grows() -> None:
    """Doubling R cuts the gap to 2 sqrt(3) by more than half."""
    gaps = [kesten_norm(2) - free_group_radial_norm(2, r) for r in (14, 28, 56)]
    assert gaps == sorted(gaps, reverse=True)
    assert gaps[1] < gaps[0] / 2.0
    assert 0.0 < gaps[2] < 1e-2


# ======================== invariants ========================


@pytest.mark.os_agnostic
def test_adjoint_has_the_same_norm_estimate(sanov_ball: BallIndex) -> None:
    """f = delta_e + b delta_a and f* = delta_e + conj(b) delta_A agree on B_R."""
    values = np.zeros(len(sanov_ball), dtype=np.complex128)
    values[0] = 1.0
    values[1] = 0.5 + 0.5j
    f = GroupFunction(sanov_ball, values)
    star = adjoint(f)
    assert star.value_at(int(sanov_ball.inverse_index[1])) == 0.5 - 0.5j
    direct = lambda_norm_lower(f, 3)
    mirrored = lambda_norm_lower(star, 3)
    assert direct.lower == pytest.approx(mirrored.lower, rel=1e-6)


@pytest.mark.os_agnostic
def test_nonnegative_estimate_is_at_least_the_identity_value(sanov_ball: BallIndex) -> None:
    """<lambda(f) delta_e, delta_e> = f(e) bounds the norm from below."""
    values = np.zeros(len(sanov_ball))
    values[0] = 2.0
    values[1:5] = 0.25
    estimate = lambda_norm_lower(GroupFunction(sanov_ball, values), 2)
    assert estimate.lower >= 2.0 - 1e-9


@pytest.mark.os_agnostic
@pytest.mark.parametrize("radius", [2, 3])
def test_estimate_never_exceeds_the_l1_norm(sanov_ball: BallIndex, rng: np.random.Generator, radius: int) -> None:
    """||lambda(f)|| <= sum |f| for every truncation."""
    values = np.zeros(len(sanov_ball), dtype=np.complex128)
    end = sanov_ball.layer_end(2)
    values[:end] = rng.standard_normal(end) + 1j * rng.standard_normal(end)
    f = GroupFunction(sanov_ball, values)
    estimate = lambda_norm_lower(f, radius)
    assert estimate.lower <= float(np.sum(np.abs(values))) + 1e-10

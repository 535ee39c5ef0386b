"""Tests for the statement checks and the suite orchestration."""

from __future__ import annotations

import math

import numpy as np
import pytest

from hcsbench.application.verify_suite import (
    SuiteSettings,
    check_convolution_bound,
    check_cs_lemma,
    check_discretization,
    check_main_inequality,
    check_radial_identity,
    check_radial_sobolev,
    check_stability,
    check_summability,
    overlap_audit,
    parse_statements,
    run_suite,
    sample_neighborhood,
    sweep_convolution_bound,
    sweep_main_inequality,
)
from hcsbench.domain.boundary_rep import BoundaryFunction, GridXi, HorocyclicXi
from hcsbench.domain.discrete_group import builtin_presentation, generate_ball
from hcsbench.domain.enums import Statement
from hcsbench.domain.errors import (
    ConfigurationError,
    CutoffTooSmallError,
    DivergentExponentError,
    NegativeMassError,
    OverlapDetectedError,
    TargetTooSmallError,
)
from hcsbench.domain.haar_integration import build_boundary_quadrature, build_chamber_quadrature
from hcsbench.domain.lie_core import random_group_element
from hcsbench.domain.reports import RadialBump, RadialShell, build_corpus, random_boundary_function
from hcsbench.domain.tolerances import DEFAULT_TOLERANCES


@pytest.fixture(scope="module")
def grid256():
    return build_boundary_quadrature(2, 256)


# ======================== radial identity ========================


@pytest.mark.os_agnostic
def test_radial_identity_with_support_beyond_cutoff_raises(grid256) -> None:
    """The chamber grid must cover the support of f."""
    one = BoundaryFunction.ones(grid256)
    quad = build_chamber_quadrature(2, 6.0, shells=8, nodes_per_shell=4)
    with pytest.raises(CutoffTooSmallError):
        check_radial_identity(RadialShell(0.5, 8.0), one, one, quad, grid256)


@pytest.mark.os_agnostic
def test_radial_identity_holds_for_constant_vectors(grid256) -> None:
    """With xi = eta = 1 both sides reduce to <f, Xi>."""
    one = BoundaryFunction.ones(grid256)
    quad = build_chamber_quadrature(2, 6.0, shells=8, nodes_per_shell=4)
    report = check_radial_identity(RadialShell(0.5, 2.0), one, one, quad, grid256)
    assert report.passed
    assert report.statement is Statement.RADIAL_IDENTITY
    assert report.empirical_constants["lhs_abs"] > 0.0


@pytest.mark.os_agnostic
def test_radial_identity_on_sl3_needs_no_quadrature_allowance(rng: np.random.Generator) -> None:
    """The Euler K grid averages frame polynomials exactly, so the fixed tolerance suffices."""
    grid = build_boundary_quadrature(3, 6)
    xi = random_boundary_function(rng, grid)
    eta = random_boundary_function(rng, grid)
    quad = build_chamber_quadrature(3, 2.0, shells=4, nodes_per_shell=2, angular_nodes=3)
    report = check_radial_identity(RadialShell(0.3, 1.5), xi, eta, quad, grid)
    assert report.passed, report.residuals
    assert report.tolerances["identity"] == DEFAULT_TOLERANCES.radial
    assert report.empirical_constants["k_defect"] < 1e-10


@pytest.mark.os_agnostic
def test_radial_sobolev_bound_holds_for_constant_vectors(grid256) -> None:
    """|<f, Xi>| stays below C_d^(1/2) ||f||_{H^d} for xi = eta = 1."""
    one = BoundaryFunction.ones(grid256)
    quad = build_chamber_quadrature(2, 6.0, shells=8, nodes_per_shell=4)
    report = check_radial_sobolev(RadialShell(0.5, 2.0), one, one, 2.0, quad)
    assert report.passed, report.residuals
    assert report.statement is Statement.RADIAL_SOBOLEV
    assert report.empirical_constants["bound"] >= report.empirical_constants["lhs_abs"]
    assert report.tolerances["bound"] == DEFAULT_TOLERANCES.radial


@pytest.mark.os_agnostic
def test_radial_sobolev_bound_holds_for_random_vectors(grid256, rng: np.random.Generator) -> None:
    """Smooth random boundary data obey the bound with ||xi||_1 ||eta||_1."""
    quad = build_chamber_quadrature(2, 6.0, shells=8, nodes_per_shell=4)
    for _ in range(3):
        xi = random_boundary_function(rng, grid256)
        eta = random_boundary_function(rng, grid256)
        report = check_radial_sobolev(RadialBump(center=1.5, width=0.8, height=1.0), xi, eta, 2.0, quad)
        assert report.passed, report.residuals
        assert report.empirical_constants["k_defect"] < DEFAULT_TOLERANCES.radial


@pytest.mark.os_agnostic
def test_radial_sobolev_rejects_inadmissible_d(grid256) -> None:
    """d = 1 makes C_d infinite on SL(2)."""
    one = BoundaryFunction.ones(grid256)
    with pytest.raises(DivergentExponentError):
        check_radial_sobolev(RadialShell(0.5, 2.0), one, one, 1.0, build_chamber_quadrature(2, 6.0))


@pytest.mark.os_agnostic
def test_radial_sobolev_with_support_beyond_cutoff_raises(grid256) -> None:
    """The chamber grid must cover the support of f."""
    one = BoundaryFunction.ones(grid256)
    with pytest.raises(CutoffTooSmallError):
        check_radial_sobolev(RadialShell(0.5, 8.0), one, one, 2.0, build_chamber_quadrature(2, 6.0))


# ======================== Cauchy-Schwarz lemma ========================


@pytest.mark.os_agnostic
def test_cs_lemma_holds_for_random_vectors(grid256, rng: np.random.Generator) -> None:
    """Random g, xi and eta never violate the inequality beyond the quadrature defect."""
    for _ in range(5):
        g = random_group_element(rng, 2, max_log=2.0)
        xi = random_boundary_function(rng, grid256)
        eta = random_boundary_function(rng, grid256)
        report = check_cs_lemma(g, xi, eta)
        assert report.passed, report.residuals


# ======================== stability lemma ========================


@pytest.mark.os_agnostic
def test_sample_neighborhood_of_radius_zero_is_the_identity(rng: np.random.Generator) -> None:
    """exp(0) = I."""
    units = sample_neighborhood(rng, 2, 0.0, 3)
    np.testing.assert_array_equal(units, np.broadcast_to(np.eye(2), (3, 2, 2)))


@pytest.mark.os_agnostic
def test_sample_neighborhood_stays_in_sl(rng: np.random.Generator) -> None:
    """Traceless generators give determinant one."""
    units = sample_neighborhood(rng, 3, 0.1, 16)
    np.testing.assert_allclose(np.linalg.det(units), 1.0, atol=1e-12)


@pytest.mark.os_agnostic
def test_overlap_audit_on_the_generator_ball() -> None:
    """The closest pair differs by a generator a with ||a - I||_2 = 2."""
    ball = generate_ball(builtin_presentation("sanov"), 1)
    distance, required = overlap_audit(ball, 0.1)
    assert distance == pytest.approx(2.0)
    assert required == pytest.approx(math.expm1(0.2))


@pytest.mark.os_agnostic
def test_stability_with_overlapping_neighborhoods_raises(grid256) -> None:
    """r = 3 needs separation e^6 - 1, far above 2."""
    with pytest.raises(OverlapDetectedError):
        check_stability(2.0, builtin_presentation("sanov"), BoundaryFunction.ones(grid256), 3.0, 4)


@pytest.mark.os_agnostic
@pytest.mark.parametrize(("radius", "sample"), [(-0.1, 4), (0.05, 0)])
def test_stability_rejects_bad_parameters(grid256, radius: float, sample: int) -> None:
    """Negative radii and empty samples are configuration errors."""
    with pytest.raises(ConfigurationError):
        check_stability(2.0, builtin_presentation("sanov"), BoundaryFunction.ones(grid256), radius, sample)


@pytest.mark.os_agnostic
def test_stability_needs_a_nonnegative_density(grid256, rng: np.random.Generator) -> None:
    """A mean-zero xi takes negative values."""
    xi = random_boundary_function(rng, grid256, mean_zero=True)
    with pytest.raises(NegativeMassError):
        check_stability(2.0, builtin_presentation("sanov"), xi, 0.05, 4)


@pytest.mark.os_agnostic
def test_stability_constant_is_finite_for_small_neighborhoods(grid256) -> None:
    """Small perturbations move the weighted coefficient by a bounded factor."""
    report = check_stability(2.0, builtin_presentation("sanov"), BoundaryFunction.ones(grid256), 0.05, 8, seed=3)
    assert math.isfinite(report.empirical_constants["c_emp"])
    assert report.empirical_constants["c_emp"] >= report.empirical_constants["c_emp_half_sample"]


# ======================== discretization ========================


@pytest.mark.os_agnostic
def test_discretization_ratios_stay_bounded(grid256) -> None:
    """Partial sums over B_R settle for an admissible d."""
    report = check_discretization(
        2.0,
        builtin_presentation("sanov"),
        BoundaryFunction.ones(grid256),
        3,
        quad=build_chamber_quadrature(2, 12.0),
        xi_eval=HorocyclicXi(),
    )
    assert report.passed
    partial = report.sequences["partial_sum"]
    assert len(partial) == 3
    assert partial == sorted(partial)


@pytest.mark.os_agnostic
def test_discretization_fails_under_a_strict_boundedness_policy(grid256) -> None:
    """max/median of increasing positive partial sums exceeds one."""
    report = check_discretization(
        2.0,
        builtin_presentation("sanov"),
        BoundaryFunction.ones(grid256),
        3,
        quad=build_chamber_quadrature(2, 12.0),
        xi_eval=HorocyclicXi(),
        tolerances=DEFAULT_TOLERANCES.replace(boundedness=1.0),
    )
    assert not report.passed
    assert report.failures == ["boundedness"]


@pytest.mark.os_agnostic
def test_discretization_radius_zero_raises(grid256) -> None:
    """At least one ball is needed."""
    with pytest.raises(ConfigurationError):
        check_discretization(2.0, builtin_presentation("sanov"), BoundaryFunction.ones(grid256), 0, xi_eval=HorocyclicXi())


@pytest.mark.os_agnostic
def test_discretization_rejects_inadmissible_d(grid256) -> None:
    """d = 1 is below the SL(2) threshold."""
    with pytest.raises(DivergentExponentError):
        check_discretization(1.0, builtin_presentation("sanov"), BoundaryFunction.ones(grid256), 2, xi_eval=HorocyclicXi())


# ======================== convolution bound ========================


@pytest.mark.os_agnostic
def test_convolution_sweep_passes_on_the_free_subgroup() -> None:
    """Split bounds hold pointwise and two max ratios are within factor 2."""
    report = sweep_convolution_bound(2.0, builtin_presentation("sanov"), [1, 2], 2, seed=1, xi_eval=HorocyclicXi())
    assert report.passed
    assert set(report.residuals) == {"split", "boundedness"}
    assert len(report.sequences["max_ratio"]) == 2


@pytest.mark.os_agnostic
def test_convolution_sweep_without_radii_raises() -> None:
    """An empty sweep has nothing to compare."""
    with pytest.raises(ConfigurationError):
        sweep_convolution_bound(2.0, builtin_presentation("sanov"), [], 2, seed=1)


@pytest.mark.os_agnostic
def test_single_radius_convolution_bound_passes() -> None:
    """Both split pieces hold for every consecutive pair."""
    presentation = builtin_presentation("sanov")
    corpus = build_corpus(generate_ball(presentation, 4), 4, seed=3, support_radius=2)
    report = check_convolution_bound(2.0, presentation, corpus, 2, xi_eval=HorocyclicXi())
    assert report.passed, report.residuals
    assert len(report.sequences["ratio"]) == 2
    assert report.inputs["target_radius"] == 4


@pytest.mark.os_agnostic
def test_convolution_bound_below_the_support_radius_raises() -> None:
    """A radius-2 corpus cannot be checked at radius 1."""
    presentation = builtin_presentation("sanov")
    corpus = build_corpus(generate_ball(presentation, 4), 2, seed=3, support_radius=2)
    with pytest.raises(TargetTooSmallError):
        check_convolution_bound(2.0, presentation, corpus, 1, xi_eval=HorocyclicXi())


# ======================== main inequality ========================


@pytest.mark.os_agnostic
@pytest.mark.parametrize("group", ["sanov", "sl2z"])
def test_main_inequality_sweep_passes_with_the_chain(group: str) -> None:
    """Shalom ordering, chain bound, l1 ceiling and boundedness all hold."""
    report = sweep_main_inequality(
        2.0, builtin_presentation(group), (1, 2), 3, 4, seed=7, grid=build_boundary_quadrature(2, 512), xi_eval=HorocyclicXi()
    )
    assert report.passed, report.residuals
    assert report.statement is Statement.MAIN_INEQUALITY
    assert set(report.residuals) == {"l1_ceiling", "shalom", "chain", "boundedness"}
    assert report.tolerances["chain"] == DEFAULT_TOLERANCES.grid
    assert report.inputs["truncation_radii"] == [4, 5]
    assert report.empirical_constants["pi_drift"] >= 0.0
    assert report.residuals["boundedness"] <= DEFAULT_TOLERANCES.boundedness


@pytest.mark.os_agnostic
def test_main_inequality_without_a_grid_keeps_the_l1_ceiling() -> None:
    """Skipping the chain still leaves a residual to judge."""
    presentation = builtin_presentation("sanov")
    corpus = build_corpus(generate_ball(presentation, 3), 2, seed=5, support_radius=1)
    report = check_main_inequality(2.0, presentation, corpus, 3, None, xi_eval=HorocyclicXi())
    assert report.inputs["chain"] == "skipped"
    assert set(report.residuals) == {"l1_ceiling"}
    assert report.passed
    assert len(report.sequences["ratio"]) == 2


@pytest.mark.os_agnostic
def test_main_inequality_on_sl3z_records_a_residual() -> None:
    """The chain is SL(2)-only; the SL(3) report is still judged."""
    presentation = builtin_presentation("sl3z")
    corpus = build_corpus(generate_ball(presentation, 2), 2, seed=5, support_radius=1)
    xi_eval = GridXi(build_boundary_quadrature(3, 6))
    report = check_main_inequality(5.0, presentation, corpus, 2, build_boundary_quadrature(2, 64), xi_eval=xi_eval)
    assert report.inputs["chain"] == "skipped"
    assert report.residuals
    assert report.passed


@pytest.mark.os_agnostic
def test_main_inequality_below_the_support_radius_raises() -> None:
    """R must cover the corpus support."""
    presentation = builtin_presentation("sanov")
    corpus = build_corpus(generate_ball(presentation, 3), 2, seed=5, support_radius=3)
    with pytest.raises(TargetTooSmallError):
        check_main_inequality(2.0, presentation, corpus, 2, None, xi_eval=HorocyclicXi())


@pytest.mark.os_agnostic
def test_main_inequality_sweep_without_radii_raises() -> None:
    """An empty sweep has nothing to compare."""
    with pytest.raises(ConfigurationError):
        sweep_main_inequality(2.0, builtin_presentation("sanov"), (), 3, 4, seed=7, grid=None)


# ======================== summability ========================


@pytest.mark.os_agnostic
def test_summability_for_admissible_d_is_convergent() -> None:
    """d = 2 sits above the threshold."""
    report = check_summability(builtin_presentation("sanov"), 2.0, 3, xi_eval=HorocyclicXi())
    assert report.inputs["regime"] == "convergent"
    assert report.passed
    assert len(report.sequences["partial_sum"]) >= 3


@pytest.mark.os_agnostic
def test_summability_below_threshold_is_informational() -> None:
    """d = 1 reports a divergent profile without residuals."""
    report = check_summability(builtin_presentation("sanov"), 1.0, 3, xi_eval=HorocyclicXi())
    assert report.inputs["regime"] == "divergent"
    assert report.residuals == {}
    assert report.passed


@pytest.mark.os_agnostic
def test_summability_radius_zero_raises() -> None:
    """The profile needs at least one ball."""
    with pytest.raises(ConfigurationError):
        check_summability(builtin_presentation("sanov"), 2.0, 0)


# ======================== statement selection ========================


@pytest.mark.os_agnostic
def test_parse_all_selects_every_statement() -> None:
    """Eight statements in declaration order."""
    assert parse_statements("all") == tuple(Statement)
    assert len(parse_statements("")) == 8


@pytest.mark.os_agnostic
def test_parse_statements_removes_duplicates() -> None:
    """The first occurrence fixes the order."""
    assert parse_statements("summability,lemma-cs,summability") == (Statement.SUMMABILITY, Statement.CS_LEMMA)


@pytest.mark.os_agnostic
def test_parse_unknown_statement_raises() -> None:
    """The message lists the valid identifiers."""
    with pytest.raises(ConfigurationError, match="prop-radial"):
        parse_statements("lemma-cs,thm9")


# ======================== suite ========================


@pytest.mark.os_agnostic
def test_run_suite_returns_reports_in_selection_order() -> None:
    """Selected statements run and report in order."""
    settings = SuiteSettings(
        presentation=builtin_presentation("sanov"),
        d=2.0,
        statements=(Statement.SUMMABILITY, Statement.CS_LEMMA),
        radius=3,
        grid_resolution=256,
        cs_samples=5,
        chamber_cutoff=12.0,
    )
    reports = run_suite(settings)
    assert [r.statement for r in reports] == [Statement.SUMMABILITY, Statement.CS_LEMMA]
    assert all(r.passed for r in reports)


@pytest.mark.os_agnostic
def test_run_suite_rejects_inadmissible_d() -> None:
    """The suite refuses d at or below the threshold before building anything."""
    settings = SuiteSettings(presentation=builtin_presentation("sanov"), d=1.5, statements=(Statement.CS_LEMMA,))
    with pytest.raises(DivergentExponentError):
        run_suite(settings)


@pytest.mark.os_agnostic
def test_settings_describe_lists_statement_ids() -> None:
    """describe() is JSON-ready."""
    settings = SuiteSettings(presentation=builtin_presentation("sanov"), d=2.0, statements=(Statement.STABILITY,))
    described = settings.describe()
    assert described["statements"] == ["lemma-stable"]
    assert described["tolerances"]["boundedness"] == DEFAULT_TOLERANCES.boundedness

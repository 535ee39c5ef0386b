"""Numerical tolerances shared by every module.

One frozen value object holds every contractual threshold so that a run can
tighten or relax them from configuration without touching call sites.
"""

from __future__ import annotations

from dataclasses import dataclass, fields


@dataclass(frozen=True, slots=True)
class Tolerances:
    """Contractual thresholds for double precision with n ≤ 4.

    Attributes:
        determinant: Relative determinant tolerance for group elements.
        chamber_sum: Absolute tolerance on Σ h_i = 0 for chamber vectors.
        orthogonality: Bound on ‖kᵀk − I‖ for orthogonal factors.
        reconstruction: Relative reconstruction error of the Cartan triple.
        length: Tolerance for symmetry/invariance of the length function.
        subadditivity: Allowed negative slack for L(gh) ≤ L(g) + L(h).
        grid: Boundary-grid tolerance (normalization, unitarity, backends).
        chain_rule: Tolerance of the cocycle chain rule.
        cauchy_schwarz: Allowed negative slack in the Cauchy–Schwarz lemma.
        radial: Residual tolerance of the radial pairing identity.
        power_iteration: Eigenvalue residual target of power iteration.
        shalom: Slack added to the Shalom ordering.
        float_key: Rounding quantum of floating ball keys.
        boundedness: Max/median factor of the bounded-ratio policy.
        stability_growth: Allowed ratio of stability constants across sample sizes.
        weight_sum: Tolerance on Σ weights = 1 for K quadratures.

    Example:
        >>> Tolerances().grid
        1e-06
        >>> Tolerances().replace(grid=1e-8).grid
        1e-08
    """

    determinant: float = 1e-10
    chamber_sum: float = 1e-10
    orthogonality: float = 1e-10
    reconstruction: float = 1e-9
    length: float = 1e-9
    subadditivity: float = 1e-9
    grid: float = 1e-6
    chain_rule: float = 1e-8
    cauchy_schwarz: float = 1e-8
    radial: float = 1e-5
    power_iteration: float = 1e-9
    shalom: float = 1e-4
    float_key: float = 1e-8
    boundedness: float = 2.0
    stability_growth: float = 1.5
    weight_sum: float = 1e-12

    def replace(self, **changes: float) -> Tolerances:
        """Return a copy with the named thresholds replaced."""
        values = {f.name: getattr(self, f.name) for f in fields(self)}
        unknown = set(changes) - set(values)
        if unknown:
            raise KeyError(f"unknown tolerance(s): {', '.join(sorted(unknown))}")
        values.update(changes)
        return Tolerances(**values)

    def as_dict(self) -> dict[str, float]:
        return {f.name: getattr(self, f.name) for f in fields(self)}


DEFAULT_TOLERANCES = Tolerances()


__all__ = ["DEFAULT_TOLERANCES", "Tolerances"]

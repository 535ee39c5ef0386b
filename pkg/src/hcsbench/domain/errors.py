"""Domain-specific exceptions for typed error handling at boundaries.

Every numerical precondition the workbench enforces maps to one exception
class. All of them derive from :class:`HcsBenchError` so the CLI can catch the
whole family in one place and translate it into an exit code.
"""

from __future__ import annotations


class HcsBenchError(Exception):
    """Root of the workbench exception hierarchy.

    Example:
        >>> from hcsbench.domain.errors import HcsBenchError
        >>> isinstance(NonFiniteError("entries"), HcsBenchError)
        True
    """


class ConfigurationError(HcsBenchError):
    """Missing, invalid, or inconsistent run configuration.

    Raised when required configuration values are absent, malformed, or
    logically inconsistent. Caught at CLI boundaries to provide
    user-friendly error messages.

    Example:
        >>> from hcsbench.domain.errors import ConfigurationError
        >>> err = ConfigurationError("run.d must be positive, got -1")
        >>> str(err)
        'run.d must be positive, got -1'
    """


class MatrixLiteralError(ConfigurationError):
    """A matrix literal such as ``"2,1;1,1"`` could not be parsed."""


class NonFiniteError(HcsBenchError, ArithmeticError):
    """NaN or infinity encountered where a finite number is required.

    Attributes:
        where: Short description of the offending quantity.
    """

    def __init__(self, where: str) -> None:
        self.where = where
        super().__init__(f"non-finite value in {where}")


class DeterminantDriftError(HcsBenchError, ValueError):
    """Matrix determinant deviates from 1 beyond the relative tolerance.

    Example:
        >>> err = DeterminantDriftError(determinant=2.0, tolerance=1e-10)
        >>> err.determinant
        2.0
    """

    def __init__(self, determinant: float, tolerance: float) -> None:
        self.determinant = determinant
        self.tolerance = tolerance
        super().__init__(f"determinant {determinant!r} deviates from 1 beyond {tolerance:.3e}")


class OrthogonalityDriftError(HcsBenchError, ValueError):
    """A matrix flagged as an element of K = SO(n) is not orthogonal.

    Attributes:
        drift: ‖kᵀk − I‖_F.
        tolerance: Allowed drift.
    """

    def __init__(self, drift: float, tolerance: float) -> None:
        self.drift = drift
        self.tolerance = tolerance
        super().__init__(f"orthogonality drift {drift:.3e} exceeds {tolerance:.3e}")


class ChamberViolationError(HcsBenchError, ValueError):
    """Coordinates do not describe a point of the closed positive chamber."""

    def __init__(self, values: list[float], reason: str) -> None:
        self.values = values
        self.reason = reason
        super().__init__(f"chamber vector must {reason}: {values}")


class DimensionMismatchError(HcsBenchError, ValueError):
    """Operands live in different ambient dimensions."""

    def __init__(self, expected: int, actual: int) -> None:
        self.expected = expected
        self.actual = actual
        super().__init__(f"dimension mismatch: expected {expected}, got {actual}")


class NumericOverflowError(HcsBenchError, OverflowError):
    """A root value α(H) exceeds the exponential overflow guard."""

    def __init__(self, value: float, limit: float) -> None:
        self.value = value
        self.limit = limit
        super().__init__(f"root value {value:.6g} exceeds overflow guard {limit:.6g}")


class DivergentExponentError(HcsBenchError, ValueError):
    """Decay exponent d violates 2d > dim_a + 2r.

    Attributes:
        d: The rejected exponent.
        minimal_d: Infimum of admissible exponents, (dim_a + 2r) / 2.

    Example:
        >>> err = DivergentExponentError(d=1.0, minimal_d=1.5)
        >>> "1.5" in str(err)
        True
    """

    def __init__(self, d: float, minimal_d: float) -> None:
        self.d = d
        self.minimal_d = minimal_d
        super().__init__(f"d={d:g} is not admissible; need d > {minimal_d:g}")


class UnsupportedDimensionError(HcsBenchError, ValueError):
    """Requested ambient dimension is outside the supported set."""

    def __init__(self, n: int, supported: tuple[int, ...]) -> None:
        self.n = n
        self.supported = supported
        super().__init__(f"dimension n={n} not supported here (supported: {', '.join(map(str, supported))})")


class InterpolationOutOfRangeError(HcsBenchError, ValueError):
    """Sampled boundary data cannot be evaluated off-grid in this dimension."""


class GridMismatchError(HcsBenchError, ValueError):
    """Boundary functions or operators live on different quadrature grids."""


class BallOverflowError(HcsBenchError):
    """Ball enumeration exceeded the configured element cap."""

    def __init__(self, cap: int, radius: int) -> None:
        self.cap = cap
        self.radius = radius
        super().__init__(f"ball of radius {radius} exceeds the element cap {cap}")


class KeyCollisionError(HcsBenchError):
    """Two distinct floating elements share a rounded canonical key."""

    def __init__(self, key: tuple[int, ...], distance: float) -> None:
        self.key = key
        self.distance = distance
        super().__init__(f"rounded key collision at full-precision distance {distance:.3e}")


class IntegerOverflowError(HcsBenchError, OverflowError):
    """Exact-integer ball entries grew beyond the safe int64 range."""


class TargetTooSmallError(HcsBenchError, ValueError):
    """Convolution target ball cannot hold the product support."""

    def __init__(self, needed: int, available: int) -> None:
        self.needed = needed
        self.available = available
        super().__init__(f"target ball radius {available} too small; need at least {needed}")


class PowerIterationStallError(HcsBenchError, ArithmeticError):
    """Power iteration hit its cap with residual above tolerance."""

    def __init__(self, residual: float, tolerance: float, iterations: int) -> None:
        self.residual = residual
        self.tolerance = tolerance
        self.iterations = iterations
        super().__init__(f"power iteration stalled after {iterations} steps (residual {residual:.3e} > {tolerance:.3e})")


class SupportNotSymmetricError(HcsBenchError, ValueError):
    """Some inverse of a support element lies outside the ball."""


class NegativeMassError(HcsBenchError, ValueError):
    """A function required to be nonnegative has a negative value."""

    def __init__(self, index: int, value: float) -> None:
        self.index = index
        self.value = value
        super().__init__(f"negative mass {value:.6g} at ball index {index}")


class CutoffTooSmallError(HcsBenchError, ValueError):
    """A radial function is supported beyond the chamber quadrature cutoff."""


class ReportNotFoundError(HcsBenchError, FileNotFoundError):
    """A report bundle named on the command line does not exist."""

    def __init__(self, path: object) -> None:
        self.path = path
        super().__init__(f"report bundle not found: {path}")


class OverlapDetectedError(HcsBenchError):
    """Translates γU of the stability neighbourhood are not pairwise disjoint."""

    def __init__(self, min_distance: float, required: float) -> None:
        self.min_distance = min_distance
        self.required = required
        super().__init__(f"neighbourhood overlap: min distance {min_distance:.4g} <= required {required:.4g}")


__all__ = [
    "BallOverflowError",
    "ChamberViolationError",
    "ConfigurationError",
    "CutoffTooSmallError",
    "DeterminantDriftError",
    "DimensionMismatchError",
    "DivergentExponentError",
    "GridMismatchError",
    "HcsBenchError",
    "IntegerOverflowError",
    "InterpolationOutOfRangeError",
    "KeyCollisionError",
    "MatrixLiteralError",
    "NegativeMassError",
    "NonFiniteError",
    "NumericOverflowError",
    "OrthogonalityDriftError",
    "OverlapDetectedError",
    "PowerIterationStallError",
    "ReportNotFoundError",
    "SupportNotSymmetricError",
    "TargetTooSmallError",
    "UnsupportedDimensionError",
]

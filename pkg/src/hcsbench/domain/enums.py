"""Type-safe domain enums for output formats, Ξ backends and suite statements."""

from __future__ import annotations

from enum import Enum


class OutputFormat(str, Enum):
    """Output format options for configuration display.

    Inherits from str to allow direct string comparison and Click integration.

    Attributes:
        HUMAN: Human-readable TOML-like output format.
        JSON: Machine-readable JSON output format.

    Example:
        >>> OutputFormat.HUMAN.value
        'human'
        >>> OutputFormat.JSON == "json"
        True
    """

    HUMAN = "human"
    JSON = "json"


class XiMethod(str, Enum):
    """Backends for the Harish-Chandra function Ξ.

    Attributes:
        BOUNDARY: ⟨π(g)1, 1⟩ with the cocycle from exterior-power norms.
        IWASAWA: ∫_K e^{−ρ(H_Iw(g⁻¹k))} dk via orthogonal–triangular factors.
        HOROCYCLIC: grid-free log-scale integral over the opposite unipotent
            subgroup (SL(2,ℝ) only).

    Example:
        >>> XiMethod("iwasawa") is XiMethod.IWASAWA
        True
    """

    BOUNDARY = "boundary"
    IWASAWA = "iwasawa"
    HOROCYCLIC = "horocyclic"


class Arithmetic(str, Enum):
    """Element arithmetic of a group presentation.

    Example:
        >>> Arithmetic.EXACT_INTEGER.value
        'exact-integer'
    """

    EXACT_INTEGER = "exact-integer"
    FLOATING = "floating"


class Statement(str, Enum):
    """Identifiers of the checkable statements run by the verification suite.

    Example:
        >>> Statement.MAIN_INEQUALITY.value
        'thm1-item2'
        >>> [s.value for s in Statement][:2]
        ['prop-radial', 'prop-radial-sobolev']
    """

    RADIAL_IDENTITY = "prop-radial"
    RADIAL_SOBOLEV = "prop-radial-sobolev"
    CS_LEMMA = "lemma-cs"
    STABILITY = "lemma-stable"
    DISCRETIZATION = "prop-discrete"
    CONVOLUTION_BOUND = "thm1-item1"
    MAIN_INEQUALITY = "thm1-item2"
    SUMMABILITY = "summability"


__all__ = [
    "Arithmetic",
    "OutputFormat",
    "Statement",
    "XiMethod",
]

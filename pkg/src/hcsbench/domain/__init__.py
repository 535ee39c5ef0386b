"""Domain layer - pure numerics with no I/O or framework dependencies.

Contents:
    * :mod:`.lie_core` - SL(n,ℝ) elements, Cartan/Iwasawa decompositions, length
    * :mod:`.haar_integration` - K and chamber quadratures, 𝒞_d
    * :mod:`.boundary_rep` - boundary cocycle, π_ν, Ξ evaluators
    * :mod:`.discrete_group` - presentations, balls, functions on Γ, norms
    * :mod:`.operator_norms` - truncated λ(f) norms and the Shalom comparison
    * :mod:`.reports` - verification reports and the seeded test corpus
    * :mod:`.enums`, :mod:`.errors`, :mod:`.tolerances`, :mod:`.parallel`
"""

from __future__ import annotations

from .enums import Arithmetic, OutputFormat, Statement, XiMethod
from .errors import ConfigurationError, HcsBenchError
from .parallel import SEQUENTIAL, ParallelContext
from .tolerances import DEFAULT_TOLERANCES, Tolerances

__all__ = [
    "DEFAULT_TOLERANCES",
    "SEQUENTIAL",
    "Arithmetic",
    "ConfigurationError",
    "HcsBenchError",
    "OutputFormat",
    "ParallelContext",
    "Statement",
    "Tolerances",
    "XiMethod",
]

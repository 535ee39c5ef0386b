"""CLI command implementations, one module per command.

Contents:
    * :mod:`.info` - package metadata
    * :mod:`.config` - merged configuration display
    * :mod:`.cartan_cmd` - Cartan decomposition of a matrix literal
    * :mod:`.xi_cmd` - Xi by every backend
    * :mod:`.cd_cmd` - the chamber constant C_d
    * :mod:`.ball_cmd` - ball enumeration and serialization
    * :mod:`.norms_cmd` - Sobolev/Schwartz weights on a ball
    * :mod:`.verify_cmd` - the statement suite
    * :mod:`.plot_cmd` - SVG figures
"""

from __future__ import annotations

from .ball_cmd import cli_ball
from .cartan_cmd import cli_cartan
from .cd_cmd import cli_cd
from .config import cli_config
from .info import cli_info
from .norms_cmd import cli_norms
from .plot_cmd import cli_plot
from .verify_cmd import cli_verify
from .xi_cmd import cli_xi

__all__ = [
    "cli_ball",
    "cli_cartan",
    "cli_cd",
    "cli_config",
    "cli_info",
    "cli_norms",
    "cli_plot",
    "cli_verify",
    "cli_xi",
]

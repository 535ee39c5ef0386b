"""Static package metadata for the ``info`` command and the config paths.

The values mirror ``pyproject.toml``; runtime code never queries packaging
metadata.
"""

from __future__ import annotations

import sys

#: Distribution name declared in ``pyproject.toml``.
name = "hcsbench"
#: Human-readable summary shown in CLI help output.
title = "Harish-Chandra–Schwartz workbench for SL(2,R), SL(3,R) and their lattices"
#: Current release version pulled from ``pyproject.toml`` by automation.
version = "0.1.0"
#: Repository homepage presented to users.
homepage = "https://github.com/bitranox/hcsbench"
#: Author attribution surfaced in CLI output.
author = "bitranox"
#: Contact email surfaced in CLI output.
author_email = "bitranox@gmail.com"
#: Console-script name published by the package.
shell_command = "hcsbench"

#: Vendor identifier for lib_layered_config paths (macOS/Windows)
LAYEREDCONF_VENDOR: str = "bitranox"
#: Application display name for lib_layered_config paths (macOS/Windows)
LAYEREDCONF_APP: str = "Hcsbench"
#: Configuration slug for lib_layered_config Linux paths and environment variables
LAYEREDCONF_SLUG: str = "hcsbench"


def print_info() -> None:
    """Print the metadata block shown by ``hcsbench info``.

    Example:
        >>> print_info()  # doctest: +ELLIPSIS
        Info for hcsbench:
        ...
    """
    fields = [
        ("name", name),
        ("title", title),
        ("version", version),
        ("homepage", homepage),
        ("author", author),
        ("author_email", author_email),
        ("shell_command", shell_command),
    ]
    pad = max(len(label) for label, _ in fields)
    lines = [f"Info for {name}:", ""]
    lines.extend(f"    {label.ljust(pad)} = {value}" for label, value in fields)
    sys.stdout.write("\n".join(lines) + "\n")

"""POSIX-conventional exit codes for CLI error paths.

Signal codes (130, 141, 143) are informational constants only; the
application never raises ``SystemExit`` with them, ``lib_cli_exit_tools``
translates signals on its own.

Contents:
    * :class:`ExitCode` - IntEnum of all exit codes used by this application.
"""

from __future__ import annotations

from enum import IntEnum


class ExitCode(IntEnum):
    """Exit codes of the ``hcsbench`` commands.

    * 0: every check passed (or the command succeeded)
    * 1: at least one verification report failed
    * 2: a referenced file does not exist
    * 22: EINVAL, a numerical precondition failed (``HcsBenchError``)
    * 78: EX_CONFIG, the configuration did not validate
    * 128+N: signal N (informational only)

    Example:
        >>> int(ExitCode.VERIFICATION_FAILED)
        1
        >>> ExitCode(78).name
        'CONFIG_ERROR'
    """

    SUCCESS = 0
    VERIFICATION_FAILED = 1
    FILE_NOT_FOUND = 2
    INVALID_ARGUMENT = 22
    CONFIG_ERROR = 78
    SIGNAL_INT = 130
    BROKEN_PIPE = 141
    SIGNAL_TERM = 143


__all__ = ["ExitCode"]

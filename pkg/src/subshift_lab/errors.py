"""Exception hierarchy shared by every module.

Each class carries the process exit code the command-line front end uses.
"""


class SubshiftError(Exception):
    exit_code = 2


class DomainError(SubshiftError, ValueError):
    """Parameters outside the mathematical domain of an operation."""

    exit_code = 2


class SizeError(SubshiftError, ValueError):
    """A window is too small for the requested shapes or shifts."""

    exit_code = 2


class CellRangeError(SubshiftError, IndexError):
    """A cell lookup fell outside a window."""

    exit_code = 2


class PrecisionError(SubshiftError):
    """The bit budget of a dyadic point cannot cover the requested grid."""

    exit_code = 3


class GridFormatError(SubshiftError, ValueError):
    exit_code = 4

"""Exception types shared across the package.

The CLI maps these onto exit codes: usage problems exit 1, infeasible
parameters exit 2, corrupted codeword data exits 3.
"""


class MdsconvError(Exception):
    """Base class for all errors raised by this package."""


class UsageError(MdsconvError):
    """Caller passed malformed arguments, shapes, or documents."""


class ParameterError(MdsconvError):
    """Parameters are internally consistent but infeasible (e.g. field too small)."""


class InsufficientDataError(MdsconvError):
    """Not enough symbols are known to determine a codeword."""


class CorruptionError(MdsconvError):
    """Supplied symbols are not consistent with any codeword."""


class SingularMatrixError(MdsconvError):
    """A matrix expected to be invertible is singular."""


class InternalError(MdsconvError):
    """An invariant the mathematics guarantees failed; indicates a bug."""

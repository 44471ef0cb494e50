"""Exception hierarchy shared across the package.

The CLI maps these onto distinct exit codes, so raise the most specific
class that applies.
"""


class MfcatError(Exception):
    """Base class for all package errors."""


class ContextMismatchError(MfcatError):
    """Operands were created under different ring contexts."""


class PreconditionError(MfcatError):
    """An operation's documented precondition was violated."""


class VerificationError(MfcatError):
    """A defining identity (d^2 = w, witness sum, closedness) failed."""


class StabilizationError(MfcatError):
    """A truncation-stabilization loop hit its cap without converging."""


class InputParseError(MfcatError):
    """Malformed file, JSON document, or inline expression."""

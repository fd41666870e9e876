"""Exception hierarchy.

Precondition and input problems derive from :class:`ValueError` so callers
can catch them generically; the CLI maps them to exit code 2.
:class:`GuaranteeViolation` signals that a proven inequality failed beyond
tolerance and is treated as a bug (exit code 3).
"""


class HeatSSEError(Exception):
    """Base class for all package errors."""


class InputError(HeatSSEError, ValueError):
    """Invalid argument or precondition failure."""


class GraphFormatError(InputError):
    """Malformed graph file; the message carries the offending line number."""

    def __init__(self, message, lineno=None):
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)


class NotIrreducible(InputError):
    pass


class IsolatedState(InputError):
    pass


class NoConvergence(HeatSSEError):
    pass


class EigensolverFailure(HeatSSEError):
    pass


class ZeroFunction(InputError):
    pass


class EmptySet(InputError):
    pass


class TooLarge(InputError):
    pass


class BadRange(InputError):
    pass


class CertificateFails(InputError):
    """The trace criterion does not hold, so no witness is guaranteed."""


class PreconditionFails(InputError):
    pass


class GammaOutOfRange(InputError):
    pass


class NegativeInput(InputError):
    pass


class NoFeasibleThreshold(HeatSSEError):
    """No threshold set fits the measure budget (cannot happen for valid input)."""


class GuaranteeViolation(HeatSSEError):
    """A proven inequality failed beyond its numerical tolerance."""

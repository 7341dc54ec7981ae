"""
Exception hierarchy for the Discord Demon Engine.

Every error raised by the library derives from DemonEngineError and carries
the process exit code the command-line interface reports for it.
"""


class DemonEngineError(Exception):
    """Base class for all library errors."""

    exit_code = 3


class ValidationError(DemonEngineError):
    """
    Raised when an input violates a documented invariant.

    Args:
        message: Human readable description
        invariant: Short name of the violated invariant, if any
    """

    exit_code = 1

    def __init__(self, message, invariant=None):
        super().__init__(message)
        self.invariant = invariant


class DimensionError(ValidationError):
    """Raised on mismatched or oversized dimensions."""


class DomainError(ValidationError):
    """Raised when a scalar parameter lies outside its allowed range."""


class ContractViolationError(ValidationError):
    """Raised when an operation's precondition does not hold."""


class CapabilityError(DemonEngineError):
    """Raised when a request is valid but not supported by this engine."""

    exit_code = 2


class NumericalError(DemonEngineError):
    """Raised when an internal cross-check between code paths fails."""

    exit_code = 3

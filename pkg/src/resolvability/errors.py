"""Exception hierarchy.

The CLI maps :class:`ValidationError` (and its subclasses) to exit code 2 and
:class:`ResourceError` to exit code 3.
"""


class ResolvabilityError(Exception):
    """Base class for all package errors."""


class ValidationError(ResolvabilityError, ValueError):
    """Input violates a documented invariant or precondition."""


class DomainError(ValidationError):
    """Arguments outside the operation's domain (alphabet mismatch, bad eps, ...)."""


class PreconditionError(ValidationError):
    """A stated side condition does not hold (e.g. ``M > exp(n c)``)."""


class InfeasibleError(ValidationError):
    """The output-matching polytope is empty."""


class DegenerateTruncationError(ValidationError):
    """The typical set carries zero probability."""


class ParseError(ValidationError):
    """Malformed model or code file."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class ResourceError(ResolvabilityError, RuntimeError):
    """An enumeration budget or atom cap would be exceeded."""

"""Exception hierarchy shared by every module.

The command-line front end maps these onto its exit codes, so library code
raises the most specific class that applies.
"""


class LMWVError(Exception):
    """Base class for all package errors."""


class DomainError(LMWVError, ValueError):
    """An argument lies outside the domain of the operation."""


class OutOfRegimeError(DomainError):
    """The truncated expansion is not positive at the requested scale."""


class NumericalFailure(LMWVError, ArithmeticError):
    """A numerical procedure did not reach its requested accuracy."""

    def __init__(self, message, error_estimate=None):
        super().__init__(message)
        self.error_estimate = error_estimate


class EmbeddingFailure(NumericalFailure):
    """The circulant embedding has materially negative eigenvalues."""


class InsufficientDataError(NumericalFailure):
    """Too few usable scales remain for a regression."""


class InputFormatError(LMWVError):
    """A data file is missing, unreadable or malformed."""

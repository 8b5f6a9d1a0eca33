"""Exception hierarchy shared by all modules."""


class PaleyWienerError(Exception):
    """Base class for errors raised by this package."""


class ParameterError(PaleyWienerError, ValueError):
    """An argument is outside its admissible range."""


class DomainError(ParameterError):
    """A theorem parameter violates the hypotheses of that theorem."""


class InsufficientDataError(PaleyWienerError, ValueError):
    """A coefficient table carries too little information for a fit."""


class IndeterminateError(PaleyWienerError):
    """A numerical estimate could not be decided from the data."""


class UnsupportedMeasureError(PaleyWienerError, TypeError):
    """The operation is not defined for the given measure body."""


class SeriesFormatError(PaleyWienerError, ValueError):
    """Malformed series or measure interchange file."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class SeriesOverflowError(PaleyWienerError, OverflowError):
    """A series value exceeds the double range; the log-domain value is attached."""

    def __init__(self, message, log_value=None):
        super().__init__(message)
        self.log_value = log_value

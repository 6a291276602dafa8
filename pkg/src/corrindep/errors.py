"""Exception hierarchy.

Everything raised on purpose by this package derives from CorrIndepError, so
callers (including the CLI) can distinguish expected failure modes from bugs.
"""


class CorrIndepError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(CorrIndepError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class SampleSizeError(DomainError):
    """The sample size n is too small for the requested quantity."""


class DegenerateColumnError(CorrIndepError):
    """A data column has zero sample variance, so its correlations are undefined.

    ``column`` is the 0-based column index.
    """

    def __init__(self, column, message=None):
        self.column = column
        if message is None:
            message = "column %d has zero sample variance" % column
        super().__init__(message)


class DegenerateCorrelationError(CorrIndepError):
    """A sample correlation equals +-1, making a ratio statistic infinite."""


class DataFormatError(CorrIndepError):
    """Input could not be parsed into a numeric data matrix."""

"""Exception hierarchy shared by every ct_hash module."""


class CTHashError(Exception):
    """Base class for all errors raised by this package."""


class ShapeMismatchError(CTHashError, ValueError):
    pass


class InterchangeNotApplicable(CTHashError, ValueError):
    """The selected 2x2 submatrix is neither [[1,0],[0,1]] nor [[0,1],[1,0]]."""


class SearchLimitExceeded(CTHashError, RuntimeError):
    """An exhaustive search was asked to go beyond its configured cap."""


class InvalidParameters(CTHashError, ValueError):
    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class ParameterGenerationError(CTHashError, RuntimeError):
    pass


class MessageTooLong(CTHashError, ValueError):
    pass


class NoSolution(CTHashError, LookupError):
    """No table realizes the requested marginals."""


class FormatError(CTHashError, ValueError):
    """A text file (tensor, matrix, params, bit string) could not be parsed."""

"""
Exception hierarchy for the LL-G toolkit.

Every error raised on purpose by the package derives from LLGError so the
command line can map it onto its exit-code contract.
"""


class LLGError(Exception):
    """Base class for all package errors."""


class ParameterError(LLGError, ValueError):
    """Raised when distribution or model parameters are invalid."""


class DomainError(LLGError, ValueError):
    """Raised when an argument lies outside the domain of a function."""


class DataError(LLGError, ValueError):
    """
    Raised when a dataset cannot be parsed or does not suit a model.

    Attributes:
        line: 1-based line of the offending token, if known
        column: 1-based column of the offending token, if known
    """

    def __init__(self, message, line=None, column=None):
        if line is not None:
            message = f"{message} (line {line}, column {column})"
        super().__init__(message)
        self.line = line
        self.column = column


class FitError(LLGError, RuntimeError):
    """
    Raised when every optimizer start diverged.

    Attributes:
        diagnostics: List of per-start dictionaries (start, message, objective)
    """

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = list(diagnostics or [])


class SeriesDivergenceError(LLGError, ArithmeticError):
    """Raised in strict mode when a truncated series fails its tail check."""

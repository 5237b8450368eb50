"""
Colorank Errors - Exception hierarchy shared by every module
"""

from typing import Optional


class ColorankError(Exception):
    """Base class for all colorank failures"""


class ParseError(ColorankError, ValueError):
    """Malformed literal or input file"""

    def __init__(self, message: str, line: Optional[int] = None, source: Optional[str] = None):
        self.message = message
        self.line = line
        self.source = source
        where = ""
        if source:
            where += f"{source}:"
        if line is not None:
            where += f"{line}:"
        super().__init__(f"{where} {message}" if where else message)


class PreconditionError(ColorankError, ValueError):
    """An operation was called on input outside its domain"""


class BudgetExceeded(ColorankError):
    """A configured resource guard was hit"""

    def __init__(self, what: str, limit: int):
        self.what = what
        self.limit = limit
        super().__init__(f"{what} exceeded budget of {limit}")


class NotFoundError(ColorankError):
    """Exhaustive search finished without a result"""

    def __init__(self, message: str, deepest_level: Optional[int] = None):
        self.deepest_level = deepest_level
        if deepest_level is not None:
            message = f"{message} (deepest level searched: {deepest_level})"
        super().__init__(message)


class DegenerateError(ColorankError, ValueError):
    """Affinely dependent point set where independence is required"""


class ConsistencyError(ColorankError):
    """Internal contradiction in computed data"""

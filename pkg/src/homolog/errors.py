"""Exception types shared across the package."""

from __future__ import annotations


class HomologError(Exception):
    """Base class for all package errors."""


class ConstantTermError(HomologError):
    """An ideal generator has a nonzero constant term."""


class NotMPrimaryError(HomologError):
    """The quotient ring is not Artinian (staircase is infinite)."""


class DegreeCapError(HomologError):
    """Buchberger produced a polynomial above the degree cap."""


class PolynomialParseError(HomologError, ValueError):
    pass


class ZeroModuleError(HomologError):
    pass


class RingMismatchError(HomologError):
    pass


class BudgetExceededError(HomologError):
    """A linear-algebra step would materialize more field elements than allowed."""


class TooShortError(HomologError, ValueError):
    pass


class UnknownCheckError(HomologError, KeyError):
    pass


class CorpusError(HomologError):
    """Corpus file problem, with 1-based line/column when known."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}" + (f", column {column}" if column is not None else "") + ": "
        super().__init__(where + message)

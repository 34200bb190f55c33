"""Exception hierarchy shared by every densfact module."""

from __future__ import annotations


class DensfactError(Exception):
    """Base class for all domain failures raised by densfact."""


class DimensionMismatch(DensfactError, ValueError):
    pass


class InvalidDimensions(DensfactError, ValueError):
    pass


class NonFiniteEntry(DensfactError, ValueError):
    pass


class NotHermitian(DensfactError, ValueError):
    pass


class NotPositiveSemidefinite(DensfactError, ValueError):
    pass


class RankDeficient(DensfactError, ValueError):
    pass


class InvalidEnsemble(DensfactError, ValueError):
    """An ensemble violates a norm or probability constraint.

    ``index`` is the offending component, or ``None`` when the violation is
    global (e.g. the probabilities do not sum to one).
    """

    def __init__(self, message: str, index: int | None = None):
        super().__init__(message)
        self.index = index


class NotUnitTrace(DensfactError, ValueError):
    pass


class NotAFactorOf(DensfactError, ValueError):
    pass


class NotMinimalOrthonormal(DensfactError, ValueError):
    pass


class NotCoIsometry(DensfactError, ValueError):
    pass


class DocumentError(DensfactError):
    """Base class for failures while reading or writing matrix documents."""


class ParseError(DocumentError, ValueError):
    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        where = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(message + where)
        self.line = line
        self.column = column


class SchemaError(DocumentError, ValueError):
    def __init__(self, message: str, field: str):
        super().__init__(f"{field}: {message}")
        self.field = field


class InvariantError(DocumentError, ValueError):
    def __init__(self, message: str, invariant: str):
        super().__init__(f"{invariant}: {message}")
        self.invariant = invariant

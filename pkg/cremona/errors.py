# cremona/errors.py
from typing import Optional


class LabError(Exception):
    """Базовая ошибка лаборатории"""


class DimensionMismatchError(LabError):
    pass


class ZeroPolynomialError(LabError):
    pass


class NotDivisibleError(LabError):
    pass


class PreconditionError(LabError):
    pass


class NotInGFormError(PreconditionError):
    pass


class HypothesisViolationError(PreconditionError):
    pass


class VerificationError(LabError):
    pass


class ParseError(LabError):
    def __init__(self, message: str, line: Optional[int] = None, column: Optional[int] = None):
        """
        Ошибка разбора текста
        Args:
            message: Описание нарушенного правила грамматики
            line: Номер строки (с 1)
            column: Номер столбца (с 1)
        """
        self.line = line
        self.column = column
        self.reason = message
        if line is not None:
            message = f"line {line}, column {column}: {message}"
        super().__init__(message)


class UsageError(LabError):
    pass

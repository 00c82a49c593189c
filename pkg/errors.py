"""Exception hierarchy for exact elimination.

MathematicalError subclasses describe a property of the input (or a broken
invariant) and map to CLI exit code 1; UsageError subclasses describe malformed
requests and map to exit code 2.
"""
from typing import Optional


class ExactLinalgError(Exception):
    """Base class for every error raised by this package."""


class MathematicalError(ExactLinalgError):
    """The request was well formed but the mathematics failed."""


class UsageError(ExactLinalgError, ValueError):
    """The request itself was malformed."""


class DivisionByZero(MathematicalError, ZeroDivisionError):
    def __init__(self, dividend):
        self.dividend = dividend
        super().__init__(f"division of {dividend} by zero")


class NonExactDivision(MathematicalError, ArithmeticError):
    """A fraction-free division left a remainder.

    Every division in a fraction-free recursion is provably exact, so this
    always means a violated hypothesis or a bug.
    """

    def __init__(self, dividend: int, divisor: int):
        self.dividend = dividend
        self.divisor = divisor
        self.remainder = dividend % divisor
        super().__init__(
            f"{dividend} is not divisible by {divisor} (remainder {self.remainder})"
        )


class ZeroPivot(MathematicalError):
    def __init__(self, step: int):
        self.step = step
        super().__init__(
            f"zero pivot at step k={step}: leading principal minor of order {step} vanishes"
        )


class StructurallySingular(MathematicalError):
    def __init__(self, step: int):
        self.step = step
        super().__init__(
            f"no nonzero pivot in column {step} at or below row {step}"
        )


class SingularMatrix(MathematicalError):
    def __init__(self, message: str = "matrix is singular"):
        super().__init__(message)


class InvalidCase(MathematicalError):
    def __init__(self, i: int, j: int, k: int):
        self.i, self.j, self.k = i, j, k
        super().__init__(
            f"entry ({i},{j}) at step {k} lies in the identity block (j <= k); "
            f"no determinant ratio applies"
        )


class ResidualMismatch(MathematicalError):
    """A computed solution or inverse failed its own exact residual check."""


class CrossCheckFailure(MathematicalError):
    """Two independent computations of the same quantity disagreed."""


class IndexOutOfBounds(UsageError, IndexError):
    pass


class DimensionMismatch(UsageError):
    pass


class NotSquare(UsageError):
    def __init__(self, rows: int, cols: int):
        self.rows, self.cols = rows, cols
        super().__init__(f"matrix is {rows}x{cols}, expected a square matrix")


class TooLarge(UsageError):
    def __init__(self, size: int, limit: int):
        self.size, self.limit = size, limit
        super().__init__(f"cofactor expansion refused for n={size} (limit {limit})")


class ScalarKindError(UsageError, TypeError):
    pass


class ParseError(UsageError):
    def __init__(self, message: str, line: Optional[int] = None, column: Optional[int] = None):
        self.line = line
        self.column = column
        self.reason = message
        if line is not None and column is not None:
            message = f"line {line}, column {column}: {message}"
        elif line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)

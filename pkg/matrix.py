"""Dense immutable matrices over exact scalars, indexed from 1."""
from fractions import Fraction
from math import lcm
from typing import Iterable, List, Sequence, Tuple

from errors import DimensionMismatch, IndexOutOfBounds, ScalarKindError
from scalars import Scalar, is_exact_scalar, render_scalar


class Matrix:
    """Rectangular matrix of ints or Fractions.

    Entries are homogeneous: if any entry is a Fraction every entry is stored as
    a Fraction. All public indices are 1-based, matching a_{i,j}.
    """

    __slots__ = ("_data", "rows", "cols")

    def __init__(self, rows: Iterable[Iterable[Scalar]]):
        data = [tuple(row) for row in rows]
        if not data or not data[0]:
            raise DimensionMismatch("a matrix needs at least one row and one column")
        width = len(data[0])
        for r, row in enumerate(data, start=1):
            if len(row) != width:
                raise DimensionMismatch(
                    f"row {r} has {len(row)} entries, expected {width}"
                )
            for x in row:
                if not is_exact_scalar(x):
                    raise ScalarKindError(f"unsupported matrix entry {x!r}")
        if any(isinstance(x, Fraction) for row in data for x in row):
            data = [tuple(Fraction(x) for x in row) for row in data]
        self._data: Tuple[Tuple[Scalar, ...], ...] = tuple(data)
        self.rows = len(data)
        self.cols = width

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls([[int(i == j) for j in range(n)] for i in range(n)])

    @classmethod
    def column_vector(cls, values: Sequence[Scalar]) -> "Matrix":
        return cls([[v] for v in values])

    def __reduce__(self):
        return (Matrix, (self._data,))

    # -- access -------------------------------------------------------------

    def _check(self, i: int, j: int) -> None:
        if not (1 <= i <= self.rows and 1 <= j <= self.cols):
            raise IndexOutOfBounds(
                f"index ({i},{j}) outside a {self.rows}x{self.cols} matrix"
            )

    def __getitem__(self, index: Tuple[int, int]) -> Scalar:
        i, j = index
        self._check(i, j)
        return self._data[i - 1][j - 1]

    def row(self, i: int) -> Tuple[Scalar, ...]:
        self._check(i, 1)
        return self._data[i - 1]

    def column(self, j: int) -> Tuple[Scalar, ...]:
        self._check(1, j)
        return tuple(row[j - 1] for row in self._data)

    def to_lists(self) -> List[List[Scalar]]:
        """Mutable 0-based copy for in-place algorithms."""
        return [list(row) for row in self._data]

    @property
    def shape(self) -> Tuple[int, int]:
        return self.rows, self.cols

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    @property
    def is_integer(self) -> bool:
        return all(isinstance(x, int) for row in self._data for x in row)

    # -- construction of related matrices ------------------------------------

    def transpose(self) -> "Matrix":
        return Matrix(zip(*self._data))

    def to_rational(self) -> "Matrix":
        return Matrix([[Fraction(x) for x in row] for row in self._data])

    def hstack(self, other: "Matrix") -> "Matrix":
        if other.rows != self.rows:
            raise DimensionMismatch(
                f"cannot place a {other.rows}-row block beside a {self.rows}-row matrix"
            )
        return Matrix(a + b for a, b in zip(self._data, other._data))

    def block(self, first_col: int, last_col: int) -> "Matrix":
        """Columns first_col..last_col (inclusive) of every row."""
        self._check(1, first_col)
        self._check(1, last_col)
        return Matrix(row[first_col - 1:last_col] for row in self._data)

    def with_column(self, j: int, values: Sequence[Scalar]) -> "Matrix":
        self._check(1, j)
        if len(values) != self.rows:
            raise DimensionMismatch(
                f"replacement column has {len(values)} entries, expected {self.rows}"
            )
        return Matrix(
            row[:j - 1] + (v,) + row[j:] for row, v in zip(self._data, values)
        )

    def permute_rows(self, mapping: Sequence[int]) -> "Matrix":
        """Row r of the result is row mapping[r-1] of self."""
        if sorted(mapping) != list(range(1, self.rows + 1)):
            raise DimensionMismatch(f"{list(mapping)} is not a permutation of 1..{self.rows}")
        return Matrix(self._data[src - 1] for src in mapping)

    def clear_denominators(self) -> Tuple["Matrix", Tuple[int, ...]]:
        """Scale every row by the lcm of its denominators.

        Returns the integer matrix and the per-row factors.
        """
        scales = []
        rows = []
        for row in self._data:
            scale = lcm(*(Fraction(x).denominator for x in row))
            scales.append(scale)
            rows.append([int(Fraction(x) * scale) for x in row])
        return Matrix(rows), tuple(scales)

    # -- arithmetic -----------------------------------------------------------

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if not isinstance(other, Matrix):
            return NotImplemented
        if self.cols != other.rows:
            raise DimensionMismatch(
                f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}"
            )
        columns = list(zip(*other._data))
        return Matrix(
            [sum((a * b for a, b in zip(row, col)), 0) for col in columns]
            for row in self._data
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, Matrix):
            return NotImplemented
        return self._data == other._data

    def __hash__(self) -> int:
        return hash(self._data)

    def __repr__(self) -> str:
        body = "; ".join(" ".join(render_scalar(x) for x in row) for row in self._data)
        return f"Matrix({self.rows}x{self.cols}: {body})"

"""Fraction-free (Bareiss) elimination producing the level tables a^{(k)}.

Level k stores a^{(k)}_{i,j} for i > k, j > k, computed by

    a^{(k)}_{i,j} = (a^{(k-1)}_{k,k} a^{(k-1)}_{i,j} - a^{(k-1)}_{i,k} a^{(k-1)}_{k,j}) / a^{(k-2)}_{k-1,k-1}

with a^{(-1)}_{0,0} = 1 and a^{(0)} = A. Each entry equals the bordered leading
minor of rows 1..k,i and columns 1..k,j, so every division is exact.
"""
import logging
from dataclasses import dataclass
from enum import Enum
from types import MappingProxyType
from typing import Dict, Mapping, NamedTuple, Tuple

from errors import IndexOutOfBounds, ScalarKindError, StructurallySingular, ZeroPivot
from matrix import Matrix
from scalars import exact_div

logger = logging.getLogger(__name__)

Table = Mapping[Tuple[int, int], int]


class PivotingMode(str, Enum):
    STRICT = "strict"
    ROW_SWAP = "swap"


def swap_table_rows(table: Table, r: int, s: int) -> Table:
    swapped: Dict[Tuple[int, int], int] = {}
    for (i, j), value in table.items():
        target = s if i == r else r if i == s else i
        swapped[(target, j)] = value
    return MappingProxyType(swapped)


@dataclass(frozen=True)
class Permutation:
    """mapping[r-1] is the source row placed at position r."""

    mapping: Tuple[int, ...]
    sign: int

    def __post_init__(self):
        if sorted(self.mapping) != list(range(1, len(self.mapping) + 1)):
            raise ValueError(f"{self.mapping} is not a permutation")
        if self.sign != _parity(self.mapping):
            raise ValueError(f"sign {self.sign} disagrees with the parity of {self.mapping}")

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(tuple(range(1, n + 1)), 1)

    @property
    def is_identity(self) -> bool:
        return self.mapping == tuple(range(1, len(self.mapping) + 1))

    def swap(self, r: int, s: int) -> "Permutation":
        mapping = list(self.mapping)
        mapping[r - 1], mapping[s - 1] = mapping[s - 1], mapping[r - 1]
        return Permutation(tuple(mapping), -self.sign)

    def apply(self, a: Matrix) -> Matrix:
        return a.permute_rows(self.mapping)


def _parity(mapping: Tuple[int, ...]) -> int:
    seen = set()
    sign = 1
    for start in range(1, len(mapping) + 1):
        if start in seen:
            continue
        length = 0
        node = start
        while node not in seen:
            seen.add(node)
            node = mapping[node - 1]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


@dataclass(frozen=True)
class FfLevel:
    """a^{(k)}_{i,j} for i > k, j > k, plus the pivot a^{(k-1)}_{k,k} (1 at level 0)."""

    k: int
    rows: int
    cols: int
    table: Table
    pivot_prev: int

    @classmethod
    def initial(cls, a: Matrix) -> "FfLevel":
        if not a.is_integer:
            raise ScalarKindError("fraction-free elimination needs an integer matrix")
        table = {(i, j): a[i, j] for i in range(1, a.rows + 1) for j in range(1, a.cols + 1)}
        return cls(0, a.rows, a.cols, MappingProxyType(table), 1)

    def entry(self, i: int, j: int) -> int:
        try:
            return self.table[(i, j)]
        except KeyError:
            raise IndexOutOfBounds(f"a^({self.k})_({i},{j}) is not stored at level {self.k}") from None

    def swapped(self, r: int, s: int) -> "FfLevel":
        return FfLevel(self.k, self.rows, self.cols, swap_table_rows(self.table, r, s), self.pivot_prev)

    def as_matrix(self) -> Matrix:
        """Trailing block rows k+1..n by columns k+1..m."""
        return Matrix(
            [self.table[(i, j)] for j in range(self.k + 1, self.cols + 1)]
            for i in range(self.k + 1, self.rows + 1)
        )


def ff_step(prev: FfLevel, prev2_pivot: int, k: int) -> FfLevel:
    """Level k from level k-1; prev2_pivot is a^{(k-2)}_{k-1,k-1}."""
    if prev.k != k - 1:
        raise ValueError(f"ff_step({k}) needs level {k - 1}, got level {prev.k}")
    pivot = prev.entry(k, k)
    if pivot == 0:
        raise ZeroPivot(k)
    if prev2_pivot == 0:
        raise ZeroPivot(k - 1)
    pivot_row = {j: prev.entry(k, j) for j in range(k + 1, prev.cols + 1)}
    table = {}
    for i in range(k + 1, prev.rows + 1):
        lead = prev.entry(i, k)
        for j, kj in pivot_row.items():
            table[(i, j)] = exact_div(pivot * prev.entry(i, j) - lead * kj, prev2_pivot)
    logger.debug("fraction-free step %d: pivot %d, divisor %d", k, pivot, prev2_pivot, extra={'step': k})
    return FfLevel(k, prev.rows, prev.cols, MappingProxyType(table), pivot)


def find_pivot_row(level_below: Table, k: int, n: int):
    """First row r >= k with a nonzero column-k entry in a level table."""
    return next((r for r in range(k, n + 1) if level_below[(r, k)] != 0), None)


class FfElimination(NamedTuple):
    levels: Tuple[FfLevel, ...]
    permutation: Permutation

    @property
    def determinant(self) -> int:
        last = self.levels[-1]
        if last.rows != last.cols:
            raise ValueError("determinant needs a square matrix")
        return self.permutation.sign * last.pivot_prev


def ff_eliminate(a: Matrix, pivoting: PivotingMode = PivotingMode.STRICT, *, trace: bool = True) -> FfElimination:
    """Run steps 1..min(n, m).

    In swap mode a row exchange at step k is applied to every retained level,
    so the result is the strict run on permutation.apply(a). With trace=False
    only the final level is returned.
    """
    pivoting = PivotingMode(pivoting)
    levels = [FfLevel.initial(a)]
    perm = Permutation.identity(a.rows)
    for k in range(1, min(a.rows, a.cols) + 1):
        prev = levels[-1]
        if prev.entry(k, k) == 0:
            if pivoting is PivotingMode.STRICT:
                raise ZeroPivot(k)
            r = find_pivot_row(prev.table, k, a.rows)
            if r is None:
                raise StructurallySingular(k)
            logger.info("step %d: swapping rows %d and %d", k, k, r, extra={'step': k})
            perm = perm.swap(k, r)
            levels = [level.swapped(k, r) for level in levels]
            prev = levels[-1]
        level = ff_step(prev, prev.pivot_prev, k)
        levels = levels + [level] if trace else [level]
    return FfElimination(tuple(levels), perm)

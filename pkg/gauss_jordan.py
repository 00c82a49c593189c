"""Gauss-Jordan steps A^k computed three ways.

* gj_rational_oracle: plain rational elimination, normalize the pivot row then
  clear the rest of column k. This is the reference meaning of A^k.
* decompose_entry / gj_closed_form_entry: each j > k entry of A^k as a signed
  ratio of two determinants of A.
* gj_reduce: fraction-free tables (Bareiss for i > k, the two above-diagonal
  recursions for i < k) followed by one division per entry.

For j > k the entry of A^k is

    i > k       a^{(k)}_{i,j}   / a^{(k-1)}_{k,k}
    i = k       a^{(k-1)}_{k,j} / a^{(k-1)}_{k,k}
    i = k-1     a^{(k)}_{i,j}   / a^{(k-1)}_{k,k}
    i <= k-2    (-1)^{k-i+1} a^{(k)}_{i,j} / a^{(k-1)}_{k,k}

where a^{(k)}_{i,j} for i < k is the negated column-substituted minor built by
determinants.bordered_minor_above.
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from types import MappingProxyType
from typing import List, Optional, Tuple

from bareiss import Permutation, PivotingMode, Table, find_pivot_row, swap_table_rows
from determinants import Determinant, bordered_minor_above, bordered_minor_below, exact_det, leading_principal_minor
from errors import IndexOutOfBounds, InvalidCase, ScalarKindError, StructurallySingular, ZeroPivot
from matrix import Matrix
from scalars import Scalar, exact_div, rational_from
from schemas import BorderedMinorSpec

logger = logging.getLogger(__name__)

CASE_BELOW = "below"
CASE_PIVOT_ROW = "pivot-row"
CASE_ABOVE = "above"


def piecewise_sign(k: int, i: int) -> int:
    """Sign of the above-diagonal ratio, written case by case."""
    if i == k - 1:
        return 1
    return -1 if (k - i + 1) % 2 else 1


def unified_sign(k: int, i: int) -> int:
    return (-1) ** (k - i + 1)


# -- rational reference -------------------------------------------------------

def gj_rational_step(m: Matrix, k: int) -> Matrix:
    """Scale row k so (k,k) becomes 1, then clear column k in every other row."""
    rows = m.to_rational().to_lists()
    pivot = rows[k - 1][k - 1]
    if pivot == 0:
        raise ZeroPivot(k)
    pivot_row = [x / pivot for x in rows[k - 1]]
    rows[k - 1] = pivot_row
    for r, row in enumerate(rows):
        factor = row[k - 1]
        if r == k - 1 or factor == 0:
            continue
        rows[r] = [x - factor * y for x, y in zip(row, pivot_row)]
    return Matrix(rows)


@dataclass(frozen=True)
class GjLevel:
    """Fraction-free tables of step k.

    below: a^{(k)}_{i,j}, i > k, j > k (level 0 holds A itself)
    above: a^{(k)}_{i,j}, i < k, j > k
    pivot: a^{(k-1)}_{k,k}, with 1 at level 0
    """

    k: int
    rows: int
    cols: int
    below: Table
    above: Table
    pivot: int

    @classmethod
    def initial(cls, a: Matrix) -> "GjLevel":
        if not a.is_integer:
            raise ScalarKindError("fraction-free elimination needs an integer matrix")
        below = {(i, j): a[i, j] for i in range(1, a.rows + 1) for j in range(1, a.cols + 1)}
        return cls(0, a.rows, a.cols, MappingProxyType(below), MappingProxyType({}), 1)

    def entry(self, i: int, j: int) -> int:
        table = self.below if i > self.k else self.above
        try:
            return table[(i, j)]
        except KeyError:
            raise IndexOutOfBounds(f"a^({self.k})_({i},{j}) is not stored at level {self.k}") from None

    def swapped(self, r: int, s: int) -> "GjLevel":
        # rows r, s > k only ever appear in the below table
        return GjLevel(self.k, self.rows, self.cols, swap_table_rows(self.below, r, s), self.above, self.pivot)


@dataclass(frozen=True)
class GjStep:
    k: int
    matrix: Matrix
    level: Optional[GjLevel] = None


@dataclass(frozen=True)
class GjTrace:
    source: Matrix
    steps: Tuple[GjStep, ...]
    permutation: Permutation

    @property
    def final(self) -> Matrix:
        return self.steps[-1].matrix if self.steps else self.source.to_rational()

    def step(self, k: int) -> GjStep:
        if not 1 <= k <= len(self.steps):
            raise IndexOutOfBounds(f"no step {k}; the trace has {len(self.steps)} steps")
        return self.steps[k - 1]


def _swap_matrix_rows(m: Matrix, r: int, s: int) -> Matrix:
    mapping = list(range(1, m.rows + 1))
    mapping[r - 1], mapping[s - 1] = mapping[s - 1], mapping[r - 1]
    return m.permute_rows(mapping)


def gj_rational_oracle(a: Matrix, pivoting: PivotingMode = PivotingMode.STRICT) -> GjTrace:
    """A^1 .. A^r, r = min(n, m), by rational arithmetic."""
    pivoting = PivotingMode(pivoting)
    current = a.to_rational()
    perm = Permutation.identity(a.rows)
    steps: List[GjStep] = []
    for k in range(1, min(a.rows, a.cols) + 1):
        if current[k, k] == 0:
            if pivoting is PivotingMode.STRICT:
                raise ZeroPivot(k)
            r = next((r for r in range(k + 1, a.rows + 1) if current[r, k] != 0), None)
            if r is None:
                raise StructurallySingular(k)
            perm = perm.swap(k, r)
            current = _swap_matrix_rows(current, k, r)
            steps = [GjStep(s.k, _swap_matrix_rows(s.matrix, k, r)) for s in steps]
        current = gj_rational_step(current, k)
        steps.append(GjStep(k, current))
    return GjTrace(a, tuple(steps), perm)


def rational_rref(a: Matrix) -> Tuple[Matrix, Tuple[int, ...]]:
    """General reduced row echelon form, rank-deficient input included.

    Returns the RREF and its pivot columns.
    """
    rows = a.to_rational().to_lists()
    n, m = a.rows, a.cols
    pivot_cols = []
    r = 0
    for c in range(m):
        if r == n:
            break
        src = next((t for t in range(r, n) if rows[t][c] != 0), None)
        if src is None:
            continue
        rows[r], rows[src] = rows[src], rows[r]
        pivot = rows[r][c]
        rows[r] = [x / pivot for x in rows[r]]
        for t in range(n):
            factor = rows[t][c]
            if t != r and factor != 0:
                rows[t] = [x - factor * y for x, y in zip(rows[t], rows[r])]
        pivot_cols.append(c + 1)
        r += 1
    return Matrix(rows), tuple(pivot_cols)


# -- closed form ---------------------------------------------------------------

@dataclass(frozen=True)
class EntryDecomposition:
    i: int
    j: int
    k: int
    case: str
    sign: int
    numerator: Scalar
    denominator: Scalar

    @property
    def value(self) -> Fraction:
        numerator = self.sign * self.numerator
        if isinstance(numerator, int) and isinstance(self.denominator, int):
            return rational_from(numerator, self.denominator)
        # rational input: minors are Fractions already
        return Fraction(numerator) / self.denominator


def decompose_entry(a: Matrix, i: int, j: int, k: int, *, det: Determinant = exact_det) -> EntryDecomposition:
    """Entry (i, j) of A^k as sign * numerator / denominator, all from minors of A."""
    if not 1 <= k <= min(a.rows, a.cols):
        raise IndexOutOfBounds(f"step {k} outside 1..{min(a.rows, a.cols)}")
    if not (1 <= i <= a.rows and 1 <= j <= a.cols):
        raise IndexOutOfBounds(f"index ({i},{j}) outside a {a.rows}x{a.cols} matrix")
    if j <= k:
        raise InvalidCase(i, j, k)
    denominator = leading_principal_minor(a, k, det=det)
    if denominator == 0:
        raise ZeroPivot(k)
    if i > k:
        numerator = bordered_minor_below(a, BorderedMinorSpec.below(k, i, j), det=det)
        return EntryDecomposition(i, j, k, CASE_BELOW, 1, numerator, denominator)
    if i == k:
        if k == 1:
            numerator = a[1, j]
        else:
            numerator = bordered_minor_below(a, BorderedMinorSpec.below(k - 1, k, j), det=det)
        return EntryDecomposition(i, j, k, CASE_PIVOT_ROW, 1, numerator, denominator)
    numerator = bordered_minor_above(a, BorderedMinorSpec.above(k, i, j), det=det)
    return EntryDecomposition(i, j, k, CASE_ABOVE, piecewise_sign(k, i), numerator, denominator)


def gj_closed_form_entry(a: Matrix, i: int, j: int, k: int, *, det: Determinant = exact_det) -> Fraction:
    return decompose_entry(a, i, j, k, det=det).value


# -- fraction-free recursion --------------------------------------------------

def gj_ff_step(level_km1: GjLevel, level_km2: Optional[GjLevel], k: int) -> GjLevel:
    """Level k from levels k-1 and k-2.

    below (i > k):   Bareiss step over level k-1
    above i <= k-2:  -(p a^{(k-1)}_{i,j} - a^{(k-1)}_{i,k} a^{(k-1)}_{k,j}) / a^{(k-2)}_{k-1,k-1}
    above i = k-1:   (a^{(k-2)}_{k,k} a^{(k-2)}_{k-1,j} - a^{(k-2)}_{k-1,k} a^{(k-2)}_{k,j}) / a^{(k-3)}_{k-2,k-2}

    with p = a^{(k-1)}_{k,k}. level_km2 may be None only for k = 1.
    """
    if level_km1.k != k - 1:
        raise ValueError(f"gj_ff_step({k}) needs level {k - 1}, got level {level_km1.k}")
    if k >= 2 and (level_km2 is None or level_km2.k != k - 2):
        raise ValueError(f"gj_ff_step({k}) needs level {k - 2} as well")
    n, m = level_km1.rows, level_km1.cols
    b1 = level_km1.below
    pivot = b1[(k, k)]
    if pivot == 0:
        raise ZeroPivot(k)
    divisor = level_km1.pivot
    if divisor == 0:
        raise ZeroPivot(k - 1)

    below = {}
    for i in range(k + 1, n + 1):
        lead = b1[(i, k)]
        for j in range(k + 1, m + 1):
            below[(i, j)] = exact_div(pivot * b1[(i, j)] - lead * b1[(k, j)], divisor)

    above = {}
    a1 = level_km1.above
    for i in range(1, k - 1):
        lead = a1[(i, k)]
        for j in range(k + 1, m + 1):
            above[(i, j)] = -exact_div(pivot * a1[(i, j)] - lead * b1[(k, j)], divisor)
    if k >= 2:
        b2 = level_km2.below
        divisor2 = level_km2.pivot
        for j in range(k + 1, m + 1):
            above[(k - 1, j)] = exact_div(
                b2[(k, k)] * b2[(k - 1, j)] - b2[(k - 1, k)] * b2[(k, j)], divisor2
            )
    logger.debug("fraction-free Gauss-Jordan step %d: pivot %d", k, pivot, extra={'step': k})
    return GjLevel(k, n, m, MappingProxyType(below), MappingProxyType(above), pivot)


def numerator_of(level: GjLevel, previous: GjLevel, i: int, j: int) -> Tuple[str, int, int]:
    """(case, sign, numerator) of entry (i, j), j > k, read off the tables."""
    k = level.k
    if i > k:
        return CASE_BELOW, 1, level.below[(i, j)]
    if i == k:
        return CASE_PIVOT_ROW, 1, previous.below[(k, j)]
    return CASE_ABOVE, piecewise_sign(k, i), level.above[(i, j)]


def assemble_step(level: GjLevel, previous: GjLevel) -> Matrix:
    """A^k from the level-k tables: identity block for j <= k, one division per entry beyond."""
    k = level.k
    rows = []
    for i in range(1, level.rows + 1):
        row = [Fraction(int(i == j)) for j in range(1, k + 1)]
        for j in range(k + 1, level.cols + 1):
            _, sign, numerator = numerator_of(level, previous, i, j)
            row.append(rational_from(sign * numerator, level.pivot))
        rows.append(row)
    return Matrix(rows)


def gj_reduce(a: Matrix, pivoting: PivotingMode = PivotingMode.STRICT) -> GjTrace:
    """Gauss-Jordan trace built from fraction-free tables."""
    pivoting = PivotingMode(pivoting)
    perm = Permutation.identity(a.rows)
    levels = [GjLevel.initial(a)]
    steps: List[GjStep] = []
    for k in range(1, min(a.rows, a.cols) + 1):
        prev = levels[-1]
        if prev.below[(k, k)] == 0:
            if pivoting is PivotingMode.STRICT:
                raise ZeroPivot(k)
            r = find_pivot_row(prev.below, k, a.rows)
            if r is None:
                raise StructurallySingular(k)
            logger.info("step %d: swapping rows %d and %d", k, k, r, extra={'step': k})
            perm = perm.swap(k, r)
            levels = [level.swapped(k, r) for level in levels]
            steps = [GjStep(s.k, _swap_matrix_rows(s.matrix, k, r), s.level.swapped(k, r)) for s in steps]
            prev = levels[-1]
        level = gj_ff_step(prev, levels[-2] if k >= 2 else None, k)
        levels.append(level)
        steps.append(GjStep(k, assemble_step(level, prev), level))
    return GjTrace(a, tuple(steps), perm)

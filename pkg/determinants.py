"""Determinant oracles and the bordered minors a^{(k)}_{i,j}.

Bordered minors are always assembled as an explicit submatrix and handed to a
determinant routine; this module is the trusted side that the recursions in
bareiss.py and gauss_jordan.py are checked against.
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import prod
from typing import Callable, Sequence

from errors import DimensionMismatch, IndexOutOfBounds, NotSquare, ScalarKindError, TooLarge
from matrix import Matrix
from scalars import Scalar, exact_div
from schemas import BorderedMinorSpec, MinorVariant

logger = logging.getLogger(__name__)

COFACTOR_MAX_SIZE = 10

Determinant = Callable[[Matrix], Scalar]


def submatrix(a: Matrix, row_idx: Sequence[int], col_idx: Sequence[int]) -> Matrix:
    """Selected rows x selected columns, order preserved."""
    for name, idx, bound in (("row", row_idx, a.rows), ("column", col_idx, a.cols)):
        if not idx:
            raise IndexOutOfBounds(f"empty {name} index list")
        if any(b <= p for p, b in zip(idx, idx[1:])):
            raise IndexOutOfBounds(f"{name} indices {list(idx)} are not strictly increasing")
        if idx[0] < 1 or idx[-1] > bound:
            raise IndexOutOfBounds(f"{name} indices {list(idx)} outside 1..{bound}")
    return Matrix([[a[i, j] for j in col_idx] for i in row_idx])


@lru_cache(maxsize=1 << 16, typed=True)
def _laplace(rows: tuple, zero: Scalar) -> Scalar:
    # keyed by content: bordered minors of one matrix share most sub-blocks.
    # typed=True keeps int and Fraction blocks apart through the type of zero.
    if len(rows) == 1:
        return rows[0][0]
    first, rest = rows[0], rows[1:]
    total = zero
    for c, entry in enumerate(first):
        if not entry:
            continue
        minor = _laplace(tuple(row[:c] + row[c + 1:] for row in rest), zero)
        total += -entry * minor if c % 2 else entry * minor
    return total


def det_cofactor(a: Matrix) -> Scalar:
    """Recursive Laplace expansion along row 1."""
    if not a.is_square:
        raise NotSquare(a.rows, a.cols)
    if a.rows > COFACTOR_MAX_SIZE:
        raise TooLarge(a.rows, COFACTOR_MAX_SIZE)
    rows = tuple(a.row(i) for i in range(1, a.rows + 1))
    return _laplace(rows, 0 if a.is_integer else Fraction(0))


def det_bareiss(a: Matrix) -> int:
    """Fraction-free determinant with row pivoting and sign tracking."""
    if not a.is_square:
        raise NotSquare(a.rows, a.cols)
    if not a.is_integer:
        raise ScalarKindError("det_bareiss needs an integer matrix; use exact_det")
    m = a.to_lists()
    n = a.rows
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            swap = next((r for r in range(k + 1, n) if m[r][k]), None)
            if swap is None:
                return 0
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        pivot = m[k][k]
        for i in range(k + 1, n):
            row_i, row_k = m[i], m[k]
            for j in range(k + 1, n):
                row_i[j] = exact_div(pivot * row_i[j] - row_i[k] * row_k[j], prev)
        prev = pivot
    return sign * m[n - 1][n - 1]


def exact_det(a: Matrix) -> Scalar:
    """Determinant of an integer or rational matrix via det_bareiss."""
    if a.is_integer:
        return det_bareiss(a)
    scaled, scales = a.clear_denominators()
    return Fraction(det_bareiss(scaled), prod(scales))


def _check_spec_bounds(a: Matrix, spec: BorderedMinorSpec) -> None:
    if spec.k > min(a.rows, a.cols) or spec.i > a.rows or spec.j > a.cols:
        raise IndexOutOfBounds(
            f"minor (k={spec.k}, i={spec.i}, j={spec.j}) outside a {a.rows}x{a.cols} matrix"
        )


def bordered_minor_below(a: Matrix, spec: BorderedMinorSpec, *, det: Determinant = det_bareiss) -> Scalar:
    """a^{(k)}_{i,j} for i > k: rows 1..k,i by columns 1..k,j."""
    if spec.variant is not MinorVariant.BELOW:
        raise ValueError(f"expected a below-diagonal spec, got {spec.variant.value}")
    _check_spec_bounds(a, spec)
    lead = list(range(1, spec.k + 1))
    return det(submatrix(a, lead + [spec.i], lead + [spec.j]))


def bordered_minor_above(a: Matrix, spec: BorderedMinorSpec, *, det: Determinant = det_bareiss) -> Scalar:
    """a^{(k)}_{i,j} for i < k: minus the k x k determinant of rows 1..k over
    columns 1..k without column i, followed by column j."""
    if spec.variant is not MinorVariant.ABOVE:
        raise ValueError(f"expected an above-diagonal spec, got {spec.variant.value}")
    _check_spec_bounds(a, spec)
    cols = [c for c in range(1, spec.k + 1) if c != spec.i] + [spec.j]
    return -det(submatrix(a, list(range(1, spec.k + 1)), cols))


def leading_principal_minor(a: Matrix, k: int, *, det: Determinant = det_bareiss) -> Scalar:
    if not 1 <= k <= min(a.rows, a.cols):
        raise IndexOutOfBounds(f"order {k} outside 1..{min(a.rows, a.cols)}")
    lead = list(range(1, k + 1))
    return det(submatrix(a, lead, lead))


def first_vanishing_minor(a: Matrix, *, det: Determinant = det_bareiss):
    """Smallest k whose leading principal minor is zero, or None."""
    for k in range(1, min(a.rows, a.cols) + 1):
        if det(submatrix(a, list(range(1, k + 1)), list(range(1, k + 1)))) == 0:
            return k
    return None


@dataclass(frozen=True)
class SylvesterVerdict:
    equal: bool
    lhs: Scalar
    rhs: Scalar


def check_sylvester_identity(
    m: Matrix,
    u: Sequence[Scalar],
    v: Sequence[Scalar],
    r: Sequence[Scalar],
    s: Sequence[Scalar],
    a: Scalar,
    b: Scalar,
    c: Scalar,
    d: Scalar,
    *,
    det: Determinant = det_cofactor,
) -> SylvesterVerdict:
    """Evaluate both sides of

        |M| * |M U V; R a b; S c d| = |M U; R a| * |M V; S d| - |M V; R b| * |M U; S c|
    """
    if not m.is_square:
        raise DimensionMismatch(f"M must be square, got {m.rows}x{m.cols}")
    p = m.rows
    for name, vec in (("U", u), ("V", v), ("R", r), ("S", s)):
        if len(vec) != p:
            raise DimensionMismatch(f"{name} has length {len(vec)}, expected {p}")
    body = [list(m.row(i)) for i in range(1, p + 1)]

    full = Matrix(
        [row + [u[t], v[t]] for t, row in enumerate(body)]
        + [list(r) + [a, b], list(s) + [c, d]]
    )

    def edge(col, row, corner):
        return det(Matrix([line + [col[t]] for t, line in enumerate(body)] + [list(row) + [corner]]))

    lhs = det(m) * det(full)
    rhs = edge(u, r, a) * edge(v, s, d) - edge(v, r, b) * edge(u, s, c)
    return SylvesterVerdict(equal=lhs == rhs, lhs=lhs, rhs=rhs)

"""Solving A X = B and inverting A through the explicit Gauss-Jordan construction.

The solution column of the augmented matrix [A | b] after n steps is, entry by
entry, a ratio of two determinants of [A | b]: a generalized Cramer's rule.
Every public routine checks its own exact residual before returning.
"""
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from math import prod
from typing import Dict, Sequence, Tuple, Union

from bareiss import Permutation, PivotingMode
from determinants import exact_det
from errors import (
    CrossCheckFailure,
    DimensionMismatch,
    NotSquare,
    ResidualMismatch,
    SingularMatrix,
    StructurallySingular,
    ZeroPivot,
)
from gauss_jordan import gj_rational_oracle, gj_reduce
from matrix import Matrix
from scalars import Scalar

logger = logging.getLogger(__name__)

RightHandSide = Union[Matrix, Sequence[Scalar]]


@dataclass(frozen=True)
class SolveResult:
    solution: Matrix
    det_a: Scalar
    permutation: Permutation
    method_agreement: Dict[str, bool] = field(default_factory=dict)

    @property
    def vector(self) -> Tuple[Fraction, ...]:
        if self.solution.cols != 1:
            raise DimensionMismatch(f"{self.solution.cols} right-hand sides; use .solution")
        return tuple(Fraction(x) for x in self.solution.column(1))


def _as_columns(a: Matrix, b: RightHandSide) -> Matrix:
    rhs = b if isinstance(b, Matrix) else Matrix.column_vector(list(b))
    if rhs.rows != a.rows:
        raise DimensionMismatch(f"right-hand side has {rhs.rows} rows, A has {a.rows}")
    return rhs


def _require_square(a: Matrix) -> None:
    if not a.is_square:
        raise NotSquare(a.rows, a.cols)


def _reduce_augmented(a: Matrix, rhs: Matrix, pivoting: PivotingMode):
    """gj_reduce on [A | rhs] with row denominators cleared; returns (trace, det A)."""
    augmented = a.hstack(rhs)
    scales = (1,) * a.rows
    if not augmented.is_integer:
        augmented, scales = augmented.clear_denominators()
    try:
        trace = gj_reduce(augmented, pivoting)
    except StructurallySingular as e:
        raise SingularMatrix(f"matrix is singular (no pivot at step {e.step})") from e
    except ZeroPivot:
        if exact_det(a) == 0:
            raise SingularMatrix() from None
        raise
    # last pivot is the leading minor of order n of the permuted, row-scaled A
    pivot = trace.steps[-1].level.pivot * trace.permutation.sign
    scale = prod(scales)
    det_a = pivot if scale == 1 else Fraction(pivot, scale)
    return trace, det_a


def cramer_classical(a: Matrix, b: RightHandSide) -> Tuple[Fraction, ...]:
    """x_i = det(A with column i replaced by b) / det(A)."""
    _require_square(a)
    rhs = _as_columns(a, b)
    if rhs.cols != 1:
        raise DimensionMismatch("classical Cramer's rule takes a single right-hand side")
    det_a = exact_det(a)
    if det_a == 0:
        raise SingularMatrix()
    column = rhs.column(1)
    return tuple(
        Fraction(exact_det(a.with_column(i, column))) / det_a
        for i in range(1, a.rows + 1)
    )


def solve_gj(
    a: Matrix,
    b: RightHandSide,
    pivoting: PivotingMode = PivotingMode.STRICT,
    *,
    cross_check: bool = True,
) -> SolveResult:
    """Solve A X = B from column block n+1.. of A^n for [A | B]."""
    _require_square(a)
    rhs = _as_columns(a, b)
    n = a.rows
    trace, det_a = _reduce_augmented(a, rhs, pivoting)
    solution = trace.final.block(n + 1, n + rhs.cols)

    if a @ solution != rhs:
        raise ResidualMismatch("A * X != B for the explicit-construction solution")

    agreement: Dict[str, bool] = {}
    if cross_check:
        agreement["cramer_classical"] = all(
            cramer_classical(a, rhs.column(c)) == solution.column(c)
            for c in range(1, rhs.cols + 1)
        )
        oracle = gj_rational_oracle(a.hstack(rhs), pivoting).final.block(n + 1, n + rhs.cols)
        agreement["rational_oracle"] = oracle == solution
        if not all(agreement.values()):
            logger.error("solver cross-check failed: %s", agreement)
            raise CrossCheckFailure(f"independent solvers disagree: {agreement}")
    logger.debug("solved %dx%d system with %d right-hand side(s)", n, n, rhs.cols)
    return SolveResult(solution, det_a, trace.permutation, agreement)


def inverse(a: Matrix, pivoting: PivotingMode = PivotingMode.STRICT) -> Matrix:
    """Right n x n block of A^n for [A | I]."""
    _require_square(a)
    n = a.rows
    identity = Matrix.identity(n)
    trace, _ = _reduce_augmented(a, identity, pivoting)
    result = trace.final.block(n + 1, 2 * n)
    if a @ result != identity or result @ a != identity:
        raise ResidualMismatch("inverse failed the A*B = B*A = I check")
    return result

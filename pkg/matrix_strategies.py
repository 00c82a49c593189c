"""Hypothesis strategies for exact matrices."""
from fractions import Fraction

from hypothesis import strategies as st

from matrix import Matrix

small_ints = st.integers(min_value=-9, max_value=9)

rationals = st.fractions(min_value=-20, max_value=20, max_denominator=12)

scalars = st.one_of(small_ints, rationals)


@st.composite
def integer_matrices(draw, min_rows=1, max_rows=5, min_cols=1, max_cols=6, elements=small_ints):
    n = draw(st.integers(min_rows, max_rows))
    m = draw(st.integers(min_cols, max_cols))
    return Matrix(draw(st.lists(st.lists(elements, min_size=m, max_size=m), min_size=n, max_size=n)))


@st.composite
def rational_matrices(draw, min_rows=1, max_rows=4, min_cols=1, max_cols=5):
    n = draw(st.integers(min_rows, max_rows))
    m = draw(st.integers(min_cols, max_cols))
    rows = draw(st.lists(st.lists(rationals, min_size=m, max_size=m), min_size=n, max_size=n))
    # force at least one non-integer entry so the matrix is stored as Fractions
    rows[0][0] = draw(small_ints) + Fraction(1, 2)
    return Matrix(rows)


@st.composite
def square_matrices(draw, min_size=1, max_size=5, elements=small_ints):
    n = draw(st.integers(min_size, max_size))
    return Matrix(draw(st.lists(st.lists(elements, min_size=n, max_size=n), min_size=n, max_size=n)))


nonzero_ints = st.integers(min_value=-5, max_value=5).filter(bool)


@st.composite
def regular_matrices(draw, min_rows=1, max_rows=5, extra_cols=2):
    """n x (n + extra_cols) integer matrices with every leading principal minor nonzero.

    Built as L @ U with L unit lower triangular and U upper trapezoidal with a
    nonzero diagonal, so the leading minor of order k is u_11 ... u_kk.
    """
    n = draw(st.integers(min_rows, max_rows))
    m = n + extra_cols
    entries = st.integers(min_value=-3, max_value=3)
    lower = Matrix([
        [draw(entries) if c < r else int(c == r) for c in range(n)] for r in range(n)
    ])
    upper = Matrix([
        [draw(nonzero_ints) if c == r else draw(entries) if c > r else 0 for c in range(m)]
        for r in range(n)
    ])
    return lower @ upper


@st.composite
def regular_systems(draw, max_size=5):
    """(A, b) with A square and all of its leading principal minors nonzero."""
    a = draw(regular_matrices(1, max_size, extra_cols=0))
    b = draw(st.lists(small_ints, min_size=a.rows, max_size=a.rows))
    return a, b

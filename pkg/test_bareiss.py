"""Tests for fraction-free elimination levels and pivoting"""
from fractions import Fraction

import pytest
from hypothesis import given, settings

from bareiss import FfLevel, Permutation, PivotingMode, ff_eliminate, ff_step
from determinants import bordered_minor_below, det_cofactor
from errors import IndexOutOfBounds, ScalarKindError, StructurallySingular, ZeroPivot
from matrix import Matrix
from matrix_strategies import regular_matrices, square_matrices
from schemas import BorderedMinorSpec


class TestFfStep:
    """Test a single fraction-free step"""

    def test_first_step(self):
        level0 = FfLevel.initial(Matrix([[2, 1], [4, 5]]))
        level1 = ff_step(level0, level0.pivot_prev, 1)
        assert level1.entry(2, 2) == 6
        assert level1.pivot_prev == 2

    def test_initial_level(self):
        a = Matrix([[3, 1], [1, 2]])
        level0 = FfLevel.initial(a)
        assert level0.pivot_prev == 1
        assert level0.as_matrix() == a

    def test_identity_unchanged(self):
        level0 = FfLevel.initial(Matrix.identity(3))
        level1 = ff_step(level0, 1, 1)
        assert level1.as_matrix() == Matrix([[1, 0], [0, 1]])

    def test_zero_pivot(self):
        level0 = FfLevel.initial(Matrix([[0, 1], [1, 0]]))
        with pytest.raises(ZeroPivot) as exc_info:
            ff_step(level0, 1, 1)
        assert exc_info.value.step == 1

    def test_wrong_level(self):
        level0 = FfLevel.initial(Matrix.identity(2))
        with pytest.raises(ValueError):
            ff_step(level0, 1, 2)

    def test_entries_outside_level_not_stored(self):
        level0 = FfLevel.initial(Matrix([[2, 1], [4, 5]]))
        level1 = ff_step(level0, 1, 1)
        with pytest.raises(IndexOutOfBounds):
            level1.entry(1, 2)

    def test_rational_input_rejected(self):
        with pytest.raises(ScalarKindError):
            FfLevel.initial(Matrix([[Fraction(1, 2)]]))


class TestFfEliminate:
    """Test full elimination runs"""

    def test_determinant(self):
        run = ff_eliminate(Matrix([[2, 1], [4, 5]]))
        assert run.determinant == 6
        assert run.permutation.is_identity

    def test_identity(self):
        run = ff_eliminate(Matrix.identity(4))
        assert run.determinant == 1
        for level in run.levels[:-1]:
            assert level.as_matrix() == Matrix.identity(4 - level.k)

    def test_strict_zero_pivot(self):
        with pytest.raises(ZeroPivot) as exc_info:
            ff_eliminate(Matrix([[0, 1], [1, 0]]))
        assert exc_info.value.step == 1

    def test_swap_mode(self):
        run = ff_eliminate(Matrix([[0, 1], [1, 0]]), PivotingMode.ROW_SWAP)
        assert run.permutation.mapping == (2, 1)
        assert run.permutation.sign == -1
        assert run.determinant == -1

    def test_structurally_singular(self):
        with pytest.raises(StructurallySingular) as exc_info:
            ff_eliminate(Matrix([[1, 2, 3], [2, 4, 5], [3, 6, 1]]), PivotingMode.ROW_SWAP)
        assert exc_info.value.step == 2

    def test_mode_from_string(self):
        run = ff_eliminate(Matrix([[0, 1], [1, 0]]), "swap")
        assert run.determinant == -1

    def test_without_trace(self):
        run = ff_eliminate(Matrix([[2, 1], [4, 5]]), trace=False)
        assert len(run.levels) == 1
        assert run.levels[0].k == 2

    def test_tall_matrix_stops_at_column_count(self):
        run = ff_eliminate(Matrix([[1, 2], [3, 4], [5, 6]]))
        assert run.levels[-1].k == 2

    @given(regular_matrices(max_rows=5))
    @settings(max_examples=60)
    def test_levels_are_bordered_minors(self, a):
        """Every stored a^{(k)}_{i,j} equals the cofactor bordered minor"""
        run = ff_eliminate(a)
        for level in run.levels[1:]:
            for (i, j), value in level.table.items():
                spec = BorderedMinorSpec.below(level.k, i, j)
                assert value == bordered_minor_below(a, spec, det=det_cofactor)

    @given(square_matrices(max_size=5))
    @settings(max_examples=60)
    def test_swap_run_equals_strict_run_on_permuted_matrix(self, a):
        try:
            swapped = ff_eliminate(a, PivotingMode.ROW_SWAP)
        except StructurallySingular:
            assert det_cofactor(a) == 0
            return
        strict = ff_eliminate(swapped.permutation.apply(a))
        assert swapped.levels == strict.levels
        assert swapped.determinant == det_cofactor(a)


class TestPermutation:
    """Test permutation bookkeeping"""

    def test_swap_tracks_sign(self):
        p = Permutation.identity(3).swap(1, 3)
        assert p.mapping == (3, 2, 1)
        assert p.sign == -1
        assert p.swap(1, 2).sign == 1

    def test_apply(self):
        p = Permutation.identity(2).swap(1, 2)
        assert p.apply(Matrix([[1], [2]])) == Matrix([[2], [1]])

    def test_rejects_wrong_parity(self):
        with pytest.raises(ValueError):
            Permutation((2, 1), 1)

    def test_rejects_non_permutation(self):
        with pytest.raises(ValueError):
            Permutation((1, 1), 1)

"""Tests for the text and JSON matrix formats"""
import json
from fractions import Fraction

import pytest
from hypothesis import given

from errors import DimensionMismatch, ParseError
from matrix import Matrix
from matrix_io import parse_matrix, parse_matrix_json, render_matrix, render_matrix_json, render_rows
from matrix_strategies import integer_matrices, rational_matrices


class TestParseMatrix:
    """Test reading the text grammar"""

    def test_identity(self):
        assert parse_matrix("2 2\n1 0\n0 1\n") == Matrix.identity(2)

    def test_missing_final_newline(self):
        assert parse_matrix("2 2\n1 0\n0 1") == Matrix.identity(2)

    def test_trailing_blank_lines(self):
        assert parse_matrix("1 1\n5\n\n\n") == Matrix([[5]])

    def test_rational_tokens(self):
        m = parse_matrix("1 2\n1/2 -3")
        assert m == Matrix([[Fraction(1, 2), -3]])
        assert not m.is_integer

    def test_integer_document_stays_integer(self):
        assert parse_matrix("1 2\n4 -3\n").is_integer

    def test_short_row(self):
        with pytest.raises(DimensionMismatch):
            parse_matrix("2 2\n1 0\n0")

    def test_missing_row(self):
        with pytest.raises(DimensionMismatch):
            parse_matrix("3 1\n1\n2\n")

    def test_bad_token_position(self):
        with pytest.raises(ParseError) as exc_info:
            parse_matrix("2 2\n1 0\n0 x\n")
        assert (exc_info.value.line, exc_info.value.column) == (3, 3)

    def test_zero_denominator(self):
        with pytest.raises(ParseError) as exc_info:
            parse_matrix("1 1\n1/0\n")
        assert exc_info.value.line == 2

    @pytest.mark.parametrize("text", ["", "2\n1 0\n", "a 2\n1 2\n", "0 2\n", "2 2 2\n", "² 2\n1 2\n", "٢ 1\n1\n2\n"])
    def test_bad_header(self, text):
        with pytest.raises(ParseError) as exc_info:
            parse_matrix(text)
        assert exc_info.value.line == 1


class TestRenderMatrix:
    """Test writing the text grammar"""

    def test_identity(self):
        assert render_matrix(Matrix.identity(2)) == "2 2\n1 0\n0 1\n"

    def test_fraction_token(self):
        assert render_matrix(Matrix([[Fraction(1, 2), Fraction(4, 2)]])) == "1 2\n1/2 2\n"

    def test_rows_only(self):
        assert render_rows(Matrix([[1], [3]])) == "1\n3\n"

    def test_entry_with_five_thousand_digits(self):
        m = Matrix([[10 ** 5000, -1], [3, int("7" * 5000)]])
        assert parse_matrix(render_matrix(m)) == m

    @given(integer_matrices())
    def test_parse_inverts_render_integer(self, m):
        assert parse_matrix(render_matrix(m)) == m

    @given(rational_matrices())
    def test_parse_inverts_render_rational(self, m):
        assert parse_matrix(render_matrix(m)) == m


class TestJsonDocuments:
    """Test the JSON interchange form"""

    def test_render(self):
        m = Matrix([[1, Fraction(-1, 2)]])
        assert json.loads(render_matrix_json(m)) == {"rows": [["1", "-1/2"]]}

    def test_parse_accepts_integers(self):
        assert parse_matrix_json('{"rows": [[1, 2], ["3", "1/2"]]}') == Matrix([[1, 2], [3, Fraction(1, 2)]])

    def test_round_trip(self):
        m = Matrix([[Fraction(7, 3), 0], [1, -2]])
        assert parse_matrix_json(render_matrix_json(m)) == m

    @pytest.mark.parametrize("text", [
        "not json",
        '{"rows": []}',
        '{"rows": [[1, 2], [3]]}',
        '{"rows": [["1/0"]]}',
        '{"cols": [[1]]}',
    ])
    def test_invalid_documents(self, text):
        with pytest.raises(ParseError):
            parse_matrix_json(text)

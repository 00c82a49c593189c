"""Text and JSON matrix documents.

Text grammar (as written):

    n SP m LF
    m tokens separated by single SP, LF      (n lines)
    token = -?[0-9]+ | -?[0-9]+/[1-9][0-9]*

Reading also tolerates a missing final LF, trailing blank lines and runs of
spaces or tabs between tokens.
"""
import json
import re

from pydantic import ValidationError

from errors import DimensionMismatch, ParseError
from matrix import Matrix
from scalars import parse_scalar, render_scalar
from schemas import MatrixDocument

_TOKEN = re.compile(r"\S+")
_DIMENSION_TOKEN = re.compile(r"[0-9]+")


def _tokens(line: str):
    """(column, token) pairs with 1-based columns."""
    return [(match.start() + 1, match.group()) for match in _TOKEN.finditer(line)]


def _parse_header(line: str):
    tokens = _tokens(line)
    if len(tokens) != 2:
        raise ParseError("header must be 'n m'", line=1, column=1)
    dims = []
    for column, token in tokens:
        if not _DIMENSION_TOKEN.fullmatch(token) or int(token) == 0:
            raise ParseError(f"dimension {token!r} is not a positive integer", line=1, column=column)
        dims.append(int(token))
    return dims


def parse_matrix(text: str) -> Matrix:
    lines = text.split("\n")
    while lines and not lines[-1].strip():
        lines.pop()
    if not lines:
        raise ParseError("empty document", line=1, column=1)
    n, m = _parse_header(lines[0])
    body = lines[1:]
    if len(body) != n:
        raise DimensionMismatch(f"header declares {n} rows, found {len(body)}")
    rows = []
    for line_no, line in enumerate(body, start=2):
        tokens = _tokens(line)
        if len(tokens) != m:
            raise DimensionMismatch(
                f"line {line_no}: header declares {m} columns, found {len(tokens)}"
            )
        row = []
        for column, token in tokens:
            try:
                row.append(parse_scalar(token))
            except ParseError as e:
                raise ParseError(e.reason, line=line_no, column=column) from None
        rows.append(row)
    return Matrix(rows)


def render_matrix(m: Matrix) -> str:
    lines = [f"{m.rows} {m.cols}"]
    lines.extend(" ".join(render_scalar(x) for x in m.row(i)) for i in range(1, m.rows + 1))
    return "\n".join(lines) + "\n"


def render_rows(m: Matrix) -> str:
    """Body lines only, no header."""
    return "".join(" ".join(render_scalar(x) for x in m.row(i)) + "\n" for i in range(1, m.rows + 1))


def to_document(m: Matrix) -> MatrixDocument:
    return MatrixDocument(rows=[[render_scalar(x) for x in m.row(i)] for i in range(1, m.rows + 1)])


def from_document(doc: MatrixDocument) -> Matrix:
    return Matrix([[parse_scalar(t) for t in row] for row in doc.rows])


def parse_matrix_json(text: str) -> Matrix:
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(e.msg, line=e.lineno, column=e.colno) from None
    try:
        doc = MatrixDocument.model_validate(payload)
    except ValidationError as e:
        raise ParseError(f"invalid matrix document: {e.errors()[0]['msg']}") from None
    return from_document(doc)


def render_matrix_json(m: Matrix) -> str:
    return to_document(m).model_dump_json() + "\n"

"""Exact scalars: arbitrary-precision integers and normalized rationals."""
import re
import sys
from fractions import Fraction
from typing import Union

from errors import DivisionByZero, NonExactDivision, ParseError

ExactInt = int
Rational = Fraction
Scalar = Union[int, Fraction]

# entries are arbitrary precision; lift the int<->str digit cap (0 = unlimited)
if hasattr(sys, "set_int_max_str_digits"):
    sys.set_int_max_str_digits(0)

_INTEGER_TOKEN = re.compile(r"-?[0-9]+")
_RATIONAL_TOKEN = re.compile(r"(-?[0-9]+)/([1-9][0-9]*)")


def exact_div(a: int, b: int) -> int:
    """Return q with q*b == a, refusing any remainder."""
    if b == 0:
        raise DivisionByZero(a)
    q, r = divmod(a, b)
    if r:
        raise NonExactDivision(a, b)
    return q


def rational_from(num: int, den: int) -> Fraction:
    """Normalized fraction num/den; the sign ends up on the numerator."""
    if den == 0:
        raise DivisionByZero(num)
    return Fraction(num, den)


def is_exact_scalar(x) -> bool:
    # bool is an int subclass but never a matrix entry
    return isinstance(x, (int, Fraction)) and not isinstance(x, bool)


def parse_scalar(token: str) -> Scalar:
    """Parse `-?[0-9]+` as int or `-?[0-9]+/[1-9][0-9]*` as Fraction."""
    if _INTEGER_TOKEN.fullmatch(token):
        return int(token)
    match = _RATIONAL_TOKEN.fullmatch(token)
    if match:
        return Fraction(int(match.group(1)), int(match.group(2)))
    raise ParseError(f"invalid scalar token {token!r}")


def render_scalar(x: Scalar) -> str:
    if isinstance(x, Fraction):
        if x.denominator == 1:
            return str(x.numerator)
        return f"{x.numerator}/{x.denominator}"
    return str(x)

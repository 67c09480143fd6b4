"""Exact rational helpers shared by every module."""

from fractions import Fraction
from typing import Any, Dict, Union

Rational = Union[int, Fraction]


def to_fraction(value: Any) -> Fraction:
    """
    Convert an int, Fraction or "p/q" string to a Fraction.

    Floats are refused: every quantity in the engine is exact.

    Raises:
        TypeError: If value is a float or an unsupported type
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not coefficients")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot use {type(value).__name__} as an exact coefficient")


def format_rational(value: Rational) -> str:
    """Render as "p/q", or "p" when the denominator is 1."""
    q = to_fraction(value)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def rational_to_json(value: Rational) -> Dict[str, int]:
    q = to_fraction(value)
    return {"num": q.numerator, "den": q.denominator}


def rational_from_json(data: Dict[str, int]) -> Fraction:
    return Fraction(int(data["num"]), int(data["den"]))


def falling_factorial(k: int, j: int) -> int:
    """k!/(k-j)! for k >= j, else 0."""
    if j > k:
        return 0
    result = 1
    for t in range(k - j + 1, k + 1):
        result *= t
    return result


def generalized_binomial(r: Fraction, n: int) -> Fraction:
    """binom(r, n) for rational r, computed exactly."""
    result = Fraction(1)
    for i in range(n):
        result = result * (r - i) / (i + 1)
    return result

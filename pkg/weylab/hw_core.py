"""
Heisenberg-Weyl algebra elements in the normal-order basis.

An element is a finite exact-rational combination of the words (a+)^i a^j.
Products are computed with the structure constants

    (a+)^i1 a^j1 (a+)^i2 a^j2 = sum_k k! C(j1,k) C(i2,k) (a+)^(i1+i2-k) a^(j1+j2-k)

with k running over 0..min(j1, i2).
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial
from typing import Any, Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple

from .exact import Rational, format_rational, rational_from_json, rational_to_json, to_fraction

logger = logging.getLogger(__name__)

ANNIHILATOR = "a"
CREATOR = "a+"
LETTERS = (ANNIHILATOR, CREATOR)

Word = Tuple[int, int]


class NormalForm:
    """
    Immutable normal-ordered element sum c_ij (a+)^i a^j.

    Zero coefficients are never stored, so equality is plain dict equality.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: Optional[Mapping[Word, Any]] = None):
        cleaned: Dict[Word, Fraction] = {}
        for (i, j), coeff in (terms or {}).items():
            if i < 0 or j < 0:
                raise ValueError(f"negative exponent in word ({i}, {j})")
            value = to_fraction(coeff)
            if value:
                cleaned[(int(i), int(j))] = value
        self._terms = cleaned

    # -- constructors -------------------------------------------------

    @classmethod
    def word(cls, i: int, j: int, coeff: Rational = 1) -> "NormalForm":
        return cls({(i, j): coeff})

    @classmethod
    def scalar(cls, value: Rational) -> "NormalForm":
        return cls({(0, 0): value})

    @classmethod
    def one(cls) -> "NormalForm":
        return cls.scalar(1)

    @classmethod
    def zero(cls) -> "NormalForm":
        return cls()

    @classmethod
    def annihilator(cls) -> "NormalForm":
        return cls.word(0, 1)

    @classmethod
    def creator(cls) -> "NormalForm":
        return cls.word(1, 0)

    # -- container protocol -------------------------------------------

    @property
    def terms(self) -> Dict[Word, Fraction]:
        return dict(self._terms)

    def coefficient(self, i: int, j: int) -> Fraction:
        return self._terms.get((i, j), Fraction(0))

    def sorted_terms(self) -> List[Tuple[Word, Fraction]]:
        """Terms in display order: total degree descending, then (i, j) descending."""
        return sorted(self._terms.items(), key=lambda item: (-(item[0][0] + item[0][1]), -item[0][0], -item[0][1]))

    def __iter__(self) -> Iterator[Tuple[Word, Fraction]]:
        return iter(self.sorted_terms())

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, NormalForm):
            return self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self == NormalForm.scalar(other)
        return NotImplemented

    def __hash__(self) -> int:
        return hash(frozenset(self._terms.items()))

    def __repr__(self) -> str:
        return f"NormalForm({self.render()!r})"

    def __str__(self) -> str:
        return self.render()

    # -- arithmetic ---------------------------------------------------

    def __add__(self, other: Any) -> "NormalForm":
        other = _coerce(other)
        merged = dict(self._terms)
        for key, coeff in other._terms.items():
            merged[key] = merged.get(key, Fraction(0)) + coeff
        return NormalForm(merged)

    __radd__ = __add__

    def __neg__(self) -> "NormalForm":
        return NormalForm({key: -coeff for key, coeff in self._terms.items()})

    def __sub__(self, other: Any) -> "NormalForm":
        return self + (-_coerce(other))

    def __rsub__(self, other: Any) -> "NormalForm":
        return _coerce(other) - self

    def scale(self, factor: Rational) -> "NormalForm":
        factor = to_fraction(factor)
        return NormalForm({key: coeff * factor for key, coeff in self._terms.items()})

    def __mul__(self, other: Any) -> "NormalForm":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if isinstance(other, NormalForm):
            return normal_product(self, other)
        return NotImplemented

    def __rmul__(self, other: Any) -> "NormalForm":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, n: int) -> "NormalForm":
        if not isinstance(n, int) or n < 0:
            raise ValueError("only nonnegative integer powers are defined")
        result = NormalForm.one()
        for _ in range(n):
            result = normal_product(result, self)
        return result

    def commutator(self, other: "NormalForm") -> "NormalForm":
        """[self, other] = self*other - other*self."""
        return normal_product(self, other) - normal_product(other, self)

    # -- structure ----------------------------------------------------

    def excess(self) -> "Excess":
        return excess_of(self)

    def max_creators(self) -> int:
        return max((i for i, _ in self._terms), default=0)

    def max_annihilators(self) -> int:
        return max((j for _, j in self._terms), default=0)

    def excess_range(self) -> Tuple[int, int]:
        """(min, max) of i - j over the terms; (0, 0) for zero."""
        if not self._terms:
            return (0, 0)
        values = [i - j for i, j in self._terms]
        return (min(values), max(values))

    # -- rendering ----------------------------------------------------

    def render(self) -> str:
        """
        Render as ``c (a+)^i a^j`` terms joined by `` + `` / `` - ``.

        The output parses back to the same element with opparser.
        """
        if not self._terms:
            return "0"
        pieces: List[str] = []
        for index, ((i, j), coeff) in enumerate(self.sorted_terms()):
            negative = coeff < 0
            body = _render_word(i, j, abs(coeff))
            if index == 0:
                pieces.append(f"-{body}" if negative else body)
            else:
                pieces.append(f" - {body}" if negative else f" + {body}")
        return "".join(pieces)

    def to_json(self) -> List[Dict[str, int]]:
        return [dict(i=i, j=j, **rational_to_json(coeff)) for (i, j), coeff in self.sorted_terms()]

    @classmethod
    def from_json(cls, data: Iterable[Mapping[str, int]]) -> "NormalForm":
        result: Dict[Word, Fraction] = {}
        for entry in data:
            key = (int(entry["i"]), int(entry["j"]))
            result[key] = result.get(key, Fraction(0)) + rational_from_json(entry)
        return cls(result)


def _render_word(i: int, j: int, coeff: Fraction) -> str:
    letters = []
    if i:
        letters.append(f"(a+)^{i}")
    if j:
        letters.append(f"a^{j}")
    if not letters:
        return format_rational(coeff)
    if coeff == 1:
        return " ".join(letters)
    return " ".join([format_rational(coeff)] + letters)


def _coerce(value: Any) -> NormalForm:
    if isinstance(value, NormalForm):
        return value
    if isinstance(value, (int, Fraction)):
        return NormalForm.scalar(value)
    raise TypeError(f"cannot combine NormalForm with {type(value).__name__}")


@dataclass(frozen=True)
class Excess:
    """
    Grading degree of a NormalForm.

    ``value`` is set only when every term has the same i - j. The zero element
    is homogeneous of every degree; it is reported with ``homogeneous=False``
    and ``is_zero=True`` so that callers needing one degree reject it.
    """

    value: Optional[int]
    homogeneous: bool
    is_zero: bool = False

    def __str__(self) -> str:
        if self.homogeneous:
            return str(self.value)
        return "zero" if self.is_zero else "not homogeneous"


def excess_of(f: NormalForm) -> Excess:
    if not f:
        return Excess(value=None, homogeneous=False, is_zero=True)
    degrees = {i - j for i, j in f.terms}
    if len(degrees) == 1:
        return Excess(value=degrees.pop(), homogeneous=True)
    return Excess(value=None, homogeneous=False)


def word_product(i1: int, j1: int, i2: int, j2: int) -> Dict[Word, int]:
    """Normal form of (a+)^i1 a^j1 (a+)^i2 a^j2 as integer structure constants."""
    return {
        (i1 + i2 - k, j1 + j2 - k): factorial(k) * comb(j1, k) * comb(i2, k)
        for k in range(min(j1, i2) + 1)
    }


def normal_product(f: NormalForm, g: NormalForm) -> NormalForm:
    """Normal form of f*g, bilinear extension of word_product."""
    result: Dict[Word, Fraction] = {}
    for (i1, j1), c1 in f.terms.items():
        for (i2, j2), c2 in g.terms.items():
            for key, constant in word_product(i1, j1, i2, j2).items():
                result[key] = result.get(key, Fraction(0)) + c1 * c2 * constant
    return NormalForm(result)


def normalize_word(word: Sequence[str]) -> NormalForm:
    """
    Normal form of a product of letters by rewriting ``a a+ -> a+ a + 1``.

    The rewrite always replaces the leftmost ``a a+`` factor; every rule
    application shortens a word or moves an ``a`` right, so it terminates.
    """
    for letter in word:
        if letter not in LETTERS:
            raise ValueError(f"unknown letter {letter!r}; expected one of {LETTERS}")
    pending: Dict[Tuple[str, ...], int] = {tuple(word): 1}
    done: Dict[Word, Fraction] = {}
    while pending:
        current, coeff = pending.popitem()
        position = _find_disorder(current)
        if position is None:
            creators = sum(1 for letter in current if letter == CREATOR)
            key = (creators, len(current) - creators)
            done[key] = done.get(key, Fraction(0)) + coeff
            continue
        swapped = current[:position] + (CREATOR, ANNIHILATOR) + current[position + 2:]
        contracted = current[:position] + current[position + 2:]
        for rewritten in (swapped, contracted):
            pending[rewritten] = pending.get(rewritten, 0) + coeff
    return NormalForm(done)


def _find_disorder(word: Tuple[str, ...]) -> Optional[int]:
    for position in range(len(word) - 1):
        if word[position] == ANNIHILATOR and word[position + 1] == CREATOR:
            return position
    return None


def double_dot(word: Sequence[str]) -> NormalForm:
    """:w: -- reorder letters as if a and a+ commuted (no commutator terms)."""
    creators = sum(1 for letter in word if letter == CREATOR)
    annihilators = sum(1 for letter in word if letter == ANNIHILATOR)
    if creators + annihilators != len(word):
        raise ValueError(f"unknown letter in {list(word)!r}")
    return NormalForm.word(creators, annihilators)


def normal_powers(omega: NormalForm, n_max: int) -> List[NormalForm]:
    """
    [N(omega^0), ..., N(omega^n_max)] by left multiplication.

    The coefficients of these forms are the three-index numbers alpha(n, i, j);
    for homogeneous omega they collapse to the Stirling table.
    """
    powers = [NormalForm.one()]
    for n in range(1, n_max + 1):
        powers.append(normal_product(powers[-1], omega))
        logger.debug(f"N(omega^{n}) has {len(powers[-1])} terms")
    return powers

"""
Truncated row-finite matrices acting on series.

A matrix M sends f = sum a_k x^k/d_k to sum b_n x^n/d_n with b = M a. Only
the top-left (N+1) x (N+1) block is stored, so every matrix carries two
exactness bands:

* ``col_band``: columns 0..col_band are complete, i.e. the true column has no
  nonzero entry below row N and every stored entry in it is correct;
* ``row_band``: rows 0..row_band are complete in the same sense.

An entry (n, k) is trustworthy when n <= row_band or k <= col_band.
"""

import logging
from enum import Enum
from fractions import Fraction
from math import factorial
from typing import Any, Dict, Iterable, List, Optional, Sequence, Set, Union

from .errors import NotHomogeneousError, OrderMismatchError, ShapeError
from .exact import falling_factorial, format_rational, rational_from_json, rational_to_json, to_fraction
from .hw_core import NormalForm, excess_of
from .reports import CheckReport
from .series import BivSeries, MultiSeries, TruncSeries

logger = logging.getLogger(__name__)

LAMBDA = "lambda"
THETA = "theta"

Scalar = Union[Fraction, TruncSeries]


class DenomSeq:
    """Nonzero denominators d_0..d_N of the basis x^n/d_n."""

    KINDS = ("ones", "factorial", "custom")

    def __init__(self, kind: str, values: Sequence[Any]):
        if kind not in self.KINDS:
            raise ValueError(f"unknown denominator kind {kind!r}; expected one of {self.KINDS}")
        self.kind = kind
        self.values: List[Fraction] = [to_fraction(v) for v in values]
        if not self.values:
            raise ValueError("denominator sequence is empty")
        if any(v == 0 for v in self.values):
            raise ValueError("denominators must be nonzero")

    @classmethod
    def ones(cls, n: int) -> "DenomSeq":
        return cls("ones", [1] * (n + 1))

    @classmethod
    def factorial(cls, n: int) -> "DenomSeq":
        return cls("factorial", [factorial(k) for k in range(n + 1)])

    @classmethod
    def custom(cls, values: Sequence[Any]) -> "DenomSeq":
        return cls("custom", values)

    @classmethod
    def named(cls, kind: str, n: int) -> "DenomSeq":
        """ones/factorial by name, as chosen on the command line."""
        if kind == "ones":
            return cls.ones(n)
        if kind == "factorial":
            return cls.factorial(n)
        raise ValueError(f"denominator kind {kind!r} needs explicit values")

    @property
    def n(self) -> int:
        return len(self.values) - 1

    def __getitem__(self, k: int) -> Fraction:
        return self.values[k]

    def __len__(self) -> int:
        return len(self.values)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DenomSeq):
            return NotImplemented
        return self.values == other.values

    def __repr__(self) -> str:
        return f"DenomSeq({self.kind!r}, n={self.n})"

    def to_json(self) -> Dict[str, Any]:
        return {"kind": self.kind, "values": [rational_to_json(v) for v in self.values]}

    @classmethod
    def from_json(cls, data: Dict[str, Any]) -> "DenomSeq":
        return cls(data["kind"], [rational_from_json(v) for v in data["values"]])


class Triangularity(Enum):
    STRICTLY_LOWER = "strictly-lower"
    DIAGONAL = "diagonal"
    STRICTLY_UPPER = "strictly-upper"
    NONE = "none"


def _is_zero(value: Scalar) -> bool:
    return not value


def _prefix_band(flags: Iterable[bool]) -> int:
    band = -1
    for index, flag in enumerate(flags):
        if not flag:
            break
        band = index
    return band


class OpMatrix:
    """
    (N+1) x (N+1) block of a row-finite matrix with exactness bands.

    Entries are Fractions, or TruncSeries in lambda for exponentials.
    """

    def __init__(self, entries: Sequence[Sequence[Any]], denoms: Optional[DenomSeq] = None,
                 row_band: Optional[int] = None, col_band: Optional[int] = None):
        size = len(entries)
        if size == 0 or any(len(row) != size for row in entries):
            raise ValueError("OpMatrix entries must form a nonempty square array")
        self.entries: List[List[Scalar]] = [
            [value if isinstance(value, TruncSeries) else to_fraction(value) for value in row]
            for row in entries
        ]
        self.denoms = denoms or DenomSeq.ones(size - 1)
        if len(self.denoms) != size:
            raise OrderMismatchError(f"{len(self.denoms)} denominators for dimension {size}")
        self.row_band = size - 1 if row_band is None else min(row_band, size - 1)
        self.col_band = size - 1 if col_band is None else min(col_band, size - 1)

    # -- constructors -------------------------------------------------

    @classmethod
    def identity(cls, n: int, denoms: Optional[DenomSeq] = None) -> "OpMatrix":
        return cls([[1 if r == c else 0 for c in range(n + 1)] for r in range(n + 1)], denoms)

    @classmethod
    def zero(cls, n: int, denoms: Optional[DenomSeq] = None) -> "OpMatrix":
        return cls([[0] * (n + 1) for _ in range(n + 1)], denoms)

    # -- access -------------------------------------------------------

    @property
    def dim(self) -> int:
        return len(self.entries)

    @property
    def n(self) -> int:
        return self.dim - 1

    @property
    def lambda_order(self) -> Optional[int]:
        for row in self.entries:
            for value in row:
                if isinstance(value, TruncSeries):
                    return value.order
        return None

    def is_rational(self) -> bool:
        return all(not isinstance(value, TruncSeries) for row in self.entries for value in row)

    def __getitem__(self, index) -> Scalar:
        n, k = index
        return self.entries[n][k]

    def is_exact(self, n: int, k: int) -> bool:
        return n <= self.row_band or k <= self.col_band

    def column(self, k: int) -> List[Scalar]:
        return [row[k] for row in self.entries]

    def nonzero(self) -> Iterable:
        for n, row in enumerate(self.entries):
            for k, value in enumerate(row):
                if not _is_zero(value):
                    yield n, k, value

    def offsets(self) -> Set[int]:
        """Distinct n - k over nonzero entries; one value for homogeneous operators."""
        return {n - k for n, k, _ in self.nonzero()}

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, OpMatrix):
            return NotImplemented
        return (self.entries, self.denoms, self.row_band, self.col_band) == (
            other.entries, other.denoms, other.row_band, other.col_band)

    def __repr__(self) -> str:
        return f"OpMatrix(dim={self.dim}, row_band={self.row_band}, col_band={self.col_band})"

    def equal_on_band(self, other: "OpMatrix") -> bool:
        """Entries agree wherever both matrices are exact."""
        self._check_compatible(other)
        return all(
            self.entries[n][k] == other.entries[n][k]
            for n in range(self.dim)
            for k in range(self.dim)
            if self.is_exact(n, k) and other.is_exact(n, k)
        )

    def _check_compatible(self, other: "OpMatrix") -> None:
        if self.dim != other.dim:
            raise OrderMismatchError(f"matrix dimensions differ: {self.dim} vs {other.dim}")
        if self.denoms != other.denoms:
            raise OrderMismatchError("matrices use different denominator sequences")

    # -- algebra ------------------------------------------------------

    def __add__(self, other: "OpMatrix") -> "OpMatrix":
        self._check_compatible(other)
        return OpMatrix(
            [[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(self.entries, other.entries)],
            self.denoms,
            min(self.row_band, other.row_band),
            min(self.col_band, other.col_band),
        )

    def __neg__(self) -> "OpMatrix":
        return self.scale(-1)

    def __sub__(self, other: "OpMatrix") -> "OpMatrix":
        return self + (-other)

    def scale(self, factor: Any) -> "OpMatrix":
        factor = to_fraction(factor)
        return OpMatrix([[value * factor for value in row] for row in self.entries],
                        self.denoms, self.row_band, self.col_band)

    def compose(self, other: "OpMatrix") -> "OpMatrix":
        """
        Matrix of self after other (self @ other).

        Column k of the product is complete when column k of other is and
        every column of self it reaches is; rows mirror this.
        """
        self._check_compatible(other)
        size = self.dim
        result: List[List[Any]] = [[Fraction(0)] * size for _ in range(size)]
        for n, m, left in self.nonzero():
            for k in range(size):
                right = other.entries[m][k]
                if not _is_zero(right):
                    result[n][k] = result[n][k] + left * right
        col_flags = [
            k <= other.col_band and all(
                m <= self.col_band for m in range(size) if not _is_zero(other.entries[m][k]))
            for k in range(size)
        ]
        row_flags = [
            n <= self.row_band and all(
                m <= other.row_band for m in range(size) if not _is_zero(self.entries[n][m]))
            for n in range(size)
        ]
        return OpMatrix(result, self.denoms, _prefix_band(row_flags), _prefix_band(col_flags))

    __matmul__ = compose

    def power(self, m: int) -> "OpMatrix":
        result = OpMatrix.identity(self.n, self.denoms)
        for _ in range(m):
            result = result.compose(self)
        return result

    def commutator(self, other: "OpMatrix") -> "OpMatrix":
        return self.compose(other) - other.compose(self)

    def transpose(self) -> "OpMatrix":
        """Plain transpose; the row and column bands trade places."""
        return OpMatrix([list(col) for col in zip(*self.entries)], self.denoms,
                        row_band=self.col_band, col_band=self.row_band)

    def at_lambda(self, value: Any) -> "OpMatrix":
        """Evaluate lambda-series entries at a rational value (truncated polynomial)."""
        value = to_fraction(value)
        return OpMatrix(
            [[entry(value) if isinstance(entry, TruncSeries) else entry for entry in row]
             for row in self.entries],
            self.denoms, self.row_band, self.col_band,
        )

    # -- serialization ------------------------------------------------

    def to_json(self) -> Dict[str, Any]:
        return {
            "dim": self.dim,
            "denoms": self.denoms.to_json(),
            "row_band": self.row_band,
            "col_band": self.col_band,
            "entries": [
                [value.to_json() if isinstance(value, TruncSeries) else rational_to_json(value) for value in row]
                for row in self.entries
            ],
        }

    @classmethod
    def from_json(cls, data: Dict[str, Any]) -> "OpMatrix":
        entries = [
            [TruncSeries.from_json(value) if "coeffs" in value else rational_from_json(value) for value in row]
            for row in data["entries"]
        ]
        denoms = DenomSeq.from_json(data["denoms"]) if "denoms" in data else None
        return cls(entries, denoms, data.get("row_band"), data.get("col_band"))

    def rows_as_text(self) -> List[List[str]]:
        """Rational entries as p/q strings, for CSV and LaTeX output."""
        if not self.is_rational():
            raise TypeError("only rational matrices have a flat text form")
        return [[format_rational(value) for value in row] for row in self.entries]


# -- representation ---------------------------------------------------


def rho_bf(f: NormalForm, n: int, denoms: Optional[DenomSeq] = None) -> OpMatrix:
    """
    Matrix of f acting by a -> d/dx, a+ -> x on the basis x^k/d_k, k <= n.

    Word (i, j) sends x^k to k!/(k-j)! x^(k-j+i); the entry is rescaled by
    d_target/d_source.
    """
    denoms = denoms or DenomSeq.ones(n)
    if len(denoms) != n + 1:
        raise OrderMismatchError(f"{len(denoms)} denominators for degree {n}")
    entries: List[List[Fraction]] = [[Fraction(0)] * (n + 1) for _ in range(n + 1)]
    col_flags = [True] * (n + 1)
    row_flags = [True] * (n + 1)
    for (i, j), coeff in f.terms.items():
        for k in range(j, n + 1):
            target = k - j + i
            if target > n:
                col_flags[k] = False
                continue
            entries[target][k] += coeff * falling_factorial(k, j) * denoms[target] / denoms[k]
        for row in range(i, n + 1):
            if row - i + j > n:
                row_flags[row] = False
    return OpMatrix(entries, denoms, _prefix_band(row_flags), _prefix_band(col_flags))


def apply(matrix: OpMatrix, f: TruncSeries) -> TruncSeries:
    """
    Image of f under a rational matrix, at f's order.

    Coefficients above ``matrix.row_band`` are not reliable.
    """
    if not matrix.is_rational():
        raise TypeError("matrix has lambda-series entries; use apply_series")
    if f.order != matrix.n:
        raise OrderMismatchError(f"series of order {f.order} against matrix of dimension {matrix.dim}")
    d = matrix.denoms
    a = [c * d[k] for k, c in enumerate(f)]
    b = [sum((value * a[k] for k, value in enumerate(row) if value and a[k]), Fraction(0))
         for row in matrix.entries]
    return TruncSeries([b[n] / d[n] for n in range(matrix.dim)], order=f.order, var=f.var)


def apply_series(matrix: OpMatrix, f: TruncSeries) -> BivSeries:
    """Image of f under a matrix with lambda-series entries, as a (lambda, x) series."""
    if f.order != matrix.n:
        raise OrderMismatchError(f"series of order {f.order} against matrix of dimension {matrix.dim}")
    order = matrix.lambda_order or 0
    d = matrix.denoms
    a = [c * d[k] for k, c in enumerate(f)]
    terms: Dict[tuple, Fraction] = {}
    for n, k, value in matrix.nonzero():
        if not a[k]:
            continue
        coeffs = value.coeffs if isinstance(value, TruncSeries) else [value]
        for m, c in enumerate(coeffs):
            if c:
                terms[(m, n)] = terms.get((m, n), Fraction(0)) + c * a[k] / d[n]
    return BivSeries((LAMBDA, f.var), (order, f.order), terms)


def compose(m: OpMatrix, p: OpMatrix) -> OpMatrix:
    return m.compose(p)


def triangularity(f: NormalForm, n: int) -> Triangularity:
    """
    Shape of rho_bf(f) for homogeneous f, read from the matrix.

    Raises:
        NotHomogeneousError: If f is zero or mixes excesses
        ShapeError: If the matrix contradicts the excess
    """
    excess = excess_of(f)
    if not excess.homogeneous:
        raise NotHomogeneousError(f"operator is {excess}: {f}")
    by_excess = (Triangularity.STRICTLY_LOWER if excess.value > 0
                 else Triangularity.DIAGONAL if excess.value == 0
                 else Triangularity.STRICTLY_UPPER)
    offsets = rho_bf(f, n).offsets()
    if not offsets:
        return by_excess
    if all(o > 0 for o in offsets):
        shape = Triangularity.STRICTLY_LOWER
    elif all(o == 0 for o in offsets):
        shape = Triangularity.DIAGONAL
    elif all(o < 0 for o in offsets):
        shape = Triangularity.STRICTLY_UPPER
    else:
        shape = Triangularity.NONE
    if shape != by_excess:
        raise ShapeError(f"matrix of {f} is {shape.value} but its excess is {excess.value}")
    return shape


def exp_lambda(f: NormalForm, n: int, lambda_order: int, denoms: Optional[DenomSeq] = None) -> OpMatrix:
    """
    sum_{m <= lambda_order} lambda^m rho(f)^m / m!, entrywise as lambda-series.

    Bands are the smallest bands of the powers used.

    Raises:
        NotHomogeneousError: If f is zero or mixes excesses
    """
    excess = excess_of(f)
    if not excess.homogeneous:
        raise NotHomogeneousError(f"operator is {excess}: {f}")
    rho = rho_bf(f, n, denoms)
    size = n + 1
    series = [[[Fraction(0)] * (lambda_order + 1) for _ in range(size)] for _ in range(size)]
    power = OpMatrix.identity(n, rho.denoms)
    row_band, col_band = power.row_band, power.col_band
    for m in range(lambda_order + 1):
        if m:
            power = power.compose(rho)
            row_band = min(row_band, power.row_band)
            col_band = min(col_band, power.col_band)
        for r, k, value in power.nonzero():
            series[r][k][m] = value / factorial(m)
        logger.debug(f"exp_lambda: power {m} of {f} has {sum(1 for _ in power.nonzero())} nonzero entries")
    entries = [[TruncSeries(cell, order=lambda_order, var=LAMBDA) for cell in row] for row in series]
    return OpMatrix(entries, rho.denoms, row_band, col_band)


def exp_group_law_check(f: NormalForm, n: int, lambda_order: int) -> CheckReport:
    """
    exp_lambda(f) at lambda times exp_lambda(f) at theta against exp_lambda(f) at lambda + theta.

    Both sides are compared as (lambda, theta) series up to total degree
    lambda_order, on the entries that the truncated product computes exactly.
    """
    exp_matrix = exp_lambda(f, n, lambda_order)
    variables, orders = (LAMBDA, THETA), (lambda_order, lambda_order)
    shifted = MultiSeries.variable(LAMBDA, variables, orders) + MultiSeries.variable(THETA, variables, orders)
    size = exp_matrix.dim
    left = [[MultiSeries.from_trunc(entry, variables, orders) for entry in row] for row in exp_matrix.entries]
    right = [[MultiSeries.from_trunc(entry.with_var(THETA), variables, orders) for entry in row]
             for row in exp_matrix.entries]
    product_band = exp_matrix.compose(exp_matrix)
    report = CheckReport(name="exp group law")
    for r in range(size):
        for k in range(size):
            if not product_band.is_exact(r, k):
                continue
            total = MultiSeries.make(variables, orders)
            for m in range(size):
                total = total + left[r][m] * right[m][k]
            target = MultiSeries.from_trunc(exp_matrix.entries[r][k], (LAMBDA,), (lambda_order,))
            expected = target.substitute(LAMBDA, shifted)
            report.record((r, k), total.truncate_total(variables, lambda_order),
                          expected.truncate_total(variables, lambda_order))
    return report.log()

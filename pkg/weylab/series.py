"""
Truncated formal power series with exact rational coefficients.

``TruncSeries`` is a dense univariate series known through degree ``order``;
``MultiSeries`` is a sparse series in several named variables truncated
independently in each one, and ``BivSeries`` its two-variable form.

Operands must carry the same truncation order: mixing orders raises
OrderMismatchError rather than silently dropping precision.
"""

import logging
from fractions import Fraction
from math import factorial
from typing import Any, Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

from .errors import OrderMismatchError, SeriesDomainError
from .exact import Rational, format_rational, generalized_binomial, rational_from_json, rational_to_json, to_fraction

logger = logging.getLogger(__name__)


class TruncSeries:
    """
    Power series ``c[0] + c[1]*x + ... + c[order]*x**order`` with unknown tail.

    The coefficient list is padded with zeros when shorter than ``order + 1``
    and cut when longer.
    """

    __slots__ = ("_coeffs", "var")

    def __init__(self, coeffs: Optional[Iterable[Any]] = None, order: Optional[int] = None, var: str = "x"):
        values = [to_fraction(c) for c in (coeffs if coeffs is not None else [])]
        if order is None:
            if not values:
                raise ValueError("order is required for an empty coefficient list")
            order = len(values) - 1
        if order < 0:
            raise ValueError(f"order cannot be less than zero: order = {order}")
        values = values[: order + 1]
        values.extend([Fraction(0)] * (order + 1 - len(values)))
        self._coeffs: Tuple[Fraction, ...] = tuple(values)
        self.var = var

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls, order: int, var: str = "x") -> "TruncSeries":
        return cls([], order=order, var=var)

    @classmethod
    def constant(cls, value: Rational, order: int, var: str = "x") -> "TruncSeries":
        return cls([value], order=order, var=var)

    @classmethod
    def monomial(cls, k: int, order: int, coeff: Rational = 1, var: str = "x") -> "TruncSeries":
        """coeff * x**k, or zero when k exceeds the order."""
        values = [0] * (order + 1)
        if k <= order:
            values[k] = coeff
        return cls(values, order=order, var=var)

    @classmethod
    def geometric(cls, order: int, var: str = "x") -> "TruncSeries":
        """1/(1 - x) = sum x**n."""
        return cls([1] * (order + 1), order=order, var=var)

    @classmethod
    def exponential(cls, order: int, var: str = "x") -> "TruncSeries":
        """e**x = sum x**n/n!."""
        return cls([Fraction(1, factorial(n)) for n in range(order + 1)], order=order, var=var)

    # -- container protocol -------------------------------------------

    @property
    def order(self) -> int:
        return len(self._coeffs) - 1

    @property
    def coeffs(self) -> List[Fraction]:
        return list(self._coeffs)

    def __getitem__(self, n: int) -> Fraction:
        if n < 0 or n > self.order:
            raise IndexError(f"degree {n} outside 0..{self.order}")
        return self._coeffs[n]

    def __iter__(self) -> Iterator[Fraction]:
        return iter(self._coeffs)

    def __len__(self) -> int:
        return len(self._coeffs)

    def __bool__(self) -> bool:
        return any(self._coeffs)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TruncSeries):
            return NotImplemented
        return self.var == other.var and self._coeffs == other._coeffs

    def __hash__(self) -> int:
        return hash((self.var, self._coeffs))

    def __repr__(self) -> str:
        return f"TruncSeries([{', '.join(format_rational(c) for c in self._coeffs)}], var={self.var!r})"

    def __str__(self) -> str:
        terms = []
        for n, c in enumerate(self._coeffs):
            if c:
                power = "" if n == 0 else (self.var if n == 1 else f"{self.var}^{n}")
                terms.append(format_rational(c) + (f" {power}" if power else ""))
        body = " + ".join(terms) if terms else "0"
        return f"{body} + O({self.var}^{self.order + 1})"

    def valuation(self) -> Optional[int]:
        """Lowest degree with a nonzero coefficient, None for the zero series."""
        for n, c in enumerate(self._coeffs):
            if c:
                return n
        return None

    def is_zero(self) -> bool:
        return not any(self._coeffs)

    def truncate(self, order: int) -> "TruncSeries":
        if order > self.order:
            raise OrderMismatchError(f"cannot raise order {self.order} to {order} by truncation")
        return TruncSeries(self._coeffs[: order + 1], order=order, var=self.var)

    def with_var(self, var: str) -> "TruncSeries":
        return TruncSeries(self._coeffs, order=self.order, var=var)

    def _check_compatible(self, other: "TruncSeries") -> None:
        if self.order != other.order:
            raise OrderMismatchError(f"truncation orders differ: {self.order} vs {other.order}")
        if self.var != other.var:
            raise OrderMismatchError(f"series variables differ: {self.var!r} vs {other.var!r}")

    # -- ring operations ----------------------------------------------

    def __add__(self, other: Any) -> "TruncSeries":
        if isinstance(other, TruncSeries):
            self._check_compatible(other)
            return TruncSeries([a + b for a, b in zip(self._coeffs, other._coeffs)], self.order, self.var)
        values = list(self._coeffs)
        values[0] += to_fraction(other)
        return TruncSeries(values, self.order, self.var)

    __radd__ = __add__

    def __neg__(self) -> "TruncSeries":
        return TruncSeries([-c for c in self._coeffs], self.order, self.var)

    def __sub__(self, other: Any) -> "TruncSeries":
        return self + (-other)

    def __rsub__(self, other: Any) -> "TruncSeries":
        return (-self) + other

    def scale(self, factor: Rational) -> "TruncSeries":
        factor = to_fraction(factor)
        return TruncSeries([c * factor for c in self._coeffs], self.order, self.var)

    def __mul__(self, other: Any) -> "TruncSeries":
        if isinstance(other, TruncSeries):
            self._check_compatible(other)
            result = [Fraction(0)] * (self.order + 1)
            for i, a in enumerate(self._coeffs):
                if not a:
                    continue
                for j in range(self.order + 1 - i):
                    result[i + j] += a * other._coeffs[j]
            return TruncSeries(result, self.order, self.var)
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __rmul__(self, other: Any) -> "TruncSeries":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def inverse(self) -> "TruncSeries":
        """
        Multiplicative inverse by the division recurrence.

        Raises:
            SeriesDomainError: If the constant term is zero
        """
        return TruncSeries.constant(1, self.order, self.var).divide(self)

    def divide(self, other: "TruncSeries") -> "TruncSeries":
        """self / other, requiring a nonzero constant term in other."""
        self._check_compatible(other)
        if not other._coeffs[0]:
            raise SeriesDomainError("division by a series with zero constant term")
        result: List[Fraction] = []
        for n in range(self.order + 1):
            total = self._coeffs[n]
            for i in range(n):
                total -= result[i] * other._coeffs[n - i]
            result.append(total / other._coeffs[0])
        return TruncSeries(result, self.order, self.var)

    def __truediv__(self, other: Any) -> "TruncSeries":
        if isinstance(other, TruncSeries):
            return self.divide(other)
        return self.scale(1 / to_fraction(other))

    def __pow__(self, n: int) -> "TruncSeries":
        if not isinstance(n, int):
            raise TypeError("use binom_pow for rational exponents")
        base = self if n >= 0 else self.inverse()
        result = TruncSeries.constant(1, self.order, self.var)
        for _ in range(abs(n)):
            result = result * base
        return result

    # -- composition and calculus -------------------------------------

    def compose(self, inner: "TruncSeries") -> "TruncSeries":
        """
        self(inner(x)) by Horner's scheme.

        Raises:
            SeriesDomainError: If inner has a nonzero constant term
        """
        if self.order != inner.order:
            raise OrderMismatchError(f"truncation orders differ: {self.order} vs {inner.order}")
        if inner._coeffs[0]:
            raise SeriesDomainError("composition requires an inner series with zero constant term")
        result = TruncSeries.constant(self._coeffs[-1], inner.order, inner.var)
        for c in reversed(self._coeffs[:-1]):
            result = result * inner + c
        return result

    def __call__(self, value: Any) -> Any:
        if isinstance(value, TruncSeries):
            return self.compose(value)
        value = to_fraction(value)
        total = Fraction(0)
        for c in reversed(self._coeffs):
            total = total * value + c
        return total

    def binom_pow(self, r: Rational) -> "TruncSeries":
        """
        self**r = sum_n binom(r, n) (self - 1)**n for a rational r.

        Raises:
            SeriesDomainError: If the constant term is not 1
        """
        if self._coeffs[0] != 1:
            raise SeriesDomainError(f"binom_pow requires constant term 1, got {format_rational(self._coeffs[0])}")
        r = to_fraction(r)
        u = self - 1
        result = TruncSeries.zero(self.order, self.var)
        power = TruncSeries.constant(1, self.order, self.var)
        for n in range(self.order + 1):
            result = result + power.scale(generalized_binomial(r, n))
            power = power * u
        return result

    def exp(self) -> "TruncSeries":
        """
        e**self for a series with zero constant term.

        Uses n g_n = sum_{k=1..n} k f_k g_{n-k}.
        """
        if self._coeffs[0]:
            raise SeriesDomainError("exp requires zero constant term")
        g = [Fraction(1)]
        for n in range(1, self.order + 1):
            total = sum((k * self._coeffs[k] * g[n - k] for k in range(1, n + 1)), Fraction(0))
            g.append(total / n)
        return TruncSeries(g, self.order, self.var)

    def log(self) -> "TruncSeries":
        """log(self) for a series with constant term 1, as the integral of self'/self."""
        if self._coeffs[0] != 1:
            raise SeriesDomainError("log requires constant term 1")
        if self.order == 0:
            return TruncSeries.zero(0, self.var)
        return self.derive().divide(self.truncate(self.order - 1)).integrate()

    def derive(self) -> "TruncSeries":
        """Formal d/dx; the order drops by one (order 0 gives the zero series)."""
        if self.order == 0:
            return TruncSeries.zero(0, self.var)
        return TruncSeries([n * self._coeffs[n] for n in range(1, self.order + 1)], self.order - 1, self.var)

    def integrate(self) -> "TruncSeries":
        """Antiderivative with zero constant term; the order rises by one."""
        return TruncSeries([0] + [c / (n + 1) for n, c in enumerate(self._coeffs)], self.order + 1, self.var)

    def reversion(self) -> "TruncSeries":
        """
        Compositional inverse r with self(r(x)) = x.

        Coefficients are fixed one degree at a time: with r known below n,
        [x^n] self(r) is linear in r_n with slope self[1].
        """
        if self._coeffs[0] or not (self.order >= 1 and self._coeffs[1]):
            raise SeriesDomainError("reversion requires valuation exactly 1")
        slope = self._coeffs[1]
        r = [Fraction(0), 1 / slope] + [Fraction(0)] * (self.order - 1)
        for n in range(2, self.order + 1):
            residual = self.compose(TruncSeries(r, self.order, self.var))[n]
            r[n] = -residual / slope
        return TruncSeries(r, self.order, self.var)

    # -- serialization ------------------------------------------------

    def to_json(self) -> Dict[str, Any]:
        return {"var": self.var, "order": self.order, "coeffs": [rational_to_json(c) for c in self._coeffs]}

    @classmethod
    def from_json(cls, data: Mapping[str, Any]) -> "TruncSeries":
        return cls([rational_from_json(c) for c in data["coeffs"]], order=int(data["order"]), var=data["var"])


# -- functional interface ---------------------------------------------


def add(f: TruncSeries, g: TruncSeries) -> TruncSeries:
    return f + g


def mul(f: TruncSeries, g: TruncSeries) -> TruncSeries:
    return f * g


def scale(f: TruncSeries, factor: Rational) -> TruncSeries:
    return f.scale(factor)


def compose(f: TruncSeries, s: TruncSeries) -> TruncSeries:
    return f.compose(s)


def binom_pow(t: TruncSeries, r: Rational) -> TruncSeries:
    return t.binom_pow(r)


def exp_trunc(f: TruncSeries) -> TruncSeries:
    return f.exp()


def log_trunc(f: TruncSeries) -> TruncSeries:
    return f.log()


def derive(f: TruncSeries) -> TruncSeries:
    return f.derive()


def integrate(f: TruncSeries) -> TruncSeries:
    return f.integrate()


# -- several variables ------------------------------------------------

Exponents = Tuple[int, ...]


class MultiSeries:
    """
    Sparse series in named variables, truncated per variable.

    A term ``c * v0**e0 * v1**e1 ...`` is kept only when ``e_i <= orders[i]``
    for every variable; zero coefficients are dropped.
    """

    __slots__ = ("variables", "orders", "_terms")

    def __init__(self, variables: Sequence[str], orders: Sequence[int], terms: Optional[Mapping[Exponents, Any]] = None):
        if len(variables) != len(orders):
            raise ValueError("one truncation order per variable is required")
        if len(set(variables)) != len(variables):
            raise ValueError(f"repeated variable in {list(variables)!r}")
        self.variables: Tuple[str, ...] = tuple(variables)
        self.orders: Tuple[int, ...] = tuple(int(o) for o in orders)
        cleaned: Dict[Exponents, Fraction] = {}
        for exps, coeff in (terms or {}).items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != len(self.variables):
                raise ValueError(f"exponent tuple {exps} does not match variables {self.variables}")
            if any(e < 0 for e in exps):
                raise ValueError(f"negative exponent in {exps}")
            if any(e > o for e, o in zip(exps, self.orders)):
                continue
            value = to_fraction(coeff)
            if value:
                cleaned[exps] = cleaned.get(exps, Fraction(0)) + value
        self._terms = {k: v for k, v in cleaned.items() if v}

    # -- constructors -------------------------------------------------

    @classmethod
    def make(cls, variables: Sequence[str], orders: Sequence[int], terms=None) -> "MultiSeries":
        """Build a BivSeries for two variables, a MultiSeries otherwise."""
        if len(variables) == 2:
            return BivSeries(variables, orders, terms)
        return MultiSeries(variables, orders, terms)

    @classmethod
    def constant(cls, value: Rational, variables: Sequence[str], orders: Sequence[int]) -> "MultiSeries":
        return cls.make(variables, orders, {(0,) * len(variables): value})

    @classmethod
    def variable(cls, name: str, variables: Sequence[str], orders: Sequence[int]) -> "MultiSeries":
        exps = tuple(1 if v == name else 0 for v in variables)
        return cls.make(variables, orders, {exps: 1})

    @classmethod
    def from_trunc(cls, f: TruncSeries, variables: Sequence[str], orders: Sequence[int]) -> "MultiSeries":
        """Embed a univariate series in ``f.var`` among ``variables``."""
        index = list(variables).index(f.var)
        terms = {}
        for n, c in enumerate(f):
            exps = [0] * len(variables)
            exps[index] = n
            terms[tuple(exps)] = c
        return cls.make(variables, orders, terms)

    # -- access -------------------------------------------------------

    @property
    def terms(self) -> Dict[Exponents, Fraction]:
        return dict(self._terms)

    def order_of(self, var: str) -> int:
        return self.orders[self.variables.index(var)]

    def coefficient(self, *exps: int, **named: int) -> Fraction:
        """Coefficient by position (``s.coefficient(2, 1)``) or by name (``s.coefficient(x=2, t=1)``)."""
        if named:
            exps = tuple(named.get(v, 0) for v in self.variables)
        return self._terms.get(tuple(exps), Fraction(0))

    def slice(self, var: str, power: int) -> "MultiSeries":
        """Coefficient of var**power as a series in the remaining variables."""
        index = self.variables.index(var)
        rest = self.variables[:index] + self.variables[index + 1:]
        rest_orders = self.orders[:index] + self.orders[index + 1:]
        terms = {
            exps[:index] + exps[index + 1:]: c
            for exps, c in self._terms.items()
            if exps[index] == power
        }
        return MultiSeries.make(rest, rest_orders, terms)

    def to_trunc(self) -> TruncSeries:
        """The univariate series of a one-variable MultiSeries."""
        if len(self.variables) != 1:
            raise ValueError(f"not univariate: {self.variables}")
        values = [self._terms.get((n,), 0) for n in range(self.orders[0] + 1)]
        return TruncSeries(values, order=self.orders[0], var=self.variables[0])

    def constant_term(self) -> Fraction:
        return self._terms.get((0,) * len(self.variables), Fraction(0))

    def valuation_in(self, var: str) -> Optional[int]:
        index = self.variables.index(var)
        return min((exps[index] for exps in self._terms), default=None)

    def is_zero(self) -> bool:
        return not self._terms

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MultiSeries):
            return NotImplemented
        return (self.variables, self.orders, self._terms) == (other.variables, other.orders, other._terms)

    def __hash__(self) -> int:
        return hash((self.variables, self.orders, frozenset(self._terms.items())))

    def __repr__(self) -> str:
        return f"{self.__class__.__name__}({self.variables}, {self.orders}, {len(self._terms)} terms)"

    # -- arithmetic ---------------------------------------------------

    def _check_compatible(self, other: "MultiSeries") -> None:
        if self.variables != other.variables or self.orders != other.orders:
            raise OrderMismatchError(
                f"series shapes differ: {dict(zip(self.variables, self.orders))} vs "
                f"{dict(zip(other.variables, other.orders))}"
            )

    def _like(self, terms: Mapping[Exponents, Any]) -> "MultiSeries":
        return MultiSeries.make(self.variables, self.orders, terms)

    def __add__(self, other: Any) -> "MultiSeries":
        if not isinstance(other, MultiSeries):
            other = MultiSeries.constant(to_fraction(other), self.variables, self.orders)
        self._check_compatible(other)
        merged = dict(self._terms)
        for exps, c in other._terms.items():
            merged[exps] = merged.get(exps, Fraction(0)) + c
        return self._like(merged)

    __radd__ = __add__

    def __neg__(self) -> "MultiSeries":
        return self._like({k: -v for k, v in self._terms.items()})

    def __sub__(self, other: Any) -> "MultiSeries":
        return self + (-other)

    def scale(self, factor: Rational) -> "MultiSeries":
        factor = to_fraction(factor)
        return self._like({k: v * factor for k, v in self._terms.items()})

    def __mul__(self, other: Any) -> "MultiSeries":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, MultiSeries):
            return NotImplemented
        self._check_compatible(other)
        result: Dict[Exponents, Fraction] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                exps = tuple(a + b for a, b in zip(e1, e2))
                if any(e > o for e, o in zip(exps, self.orders)):
                    continue
                result[exps] = result.get(exps, Fraction(0)) + c1 * c2
        return self._like(result)

    def __rmul__(self, other: Any) -> "MultiSeries":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    # -- structural changes -------------------------------------------

    def extend(self, variables: Sequence[str], orders: Sequence[int]) -> "MultiSeries":
        """Re-express over a superset of variables (or a reordering), with new orders."""
        missing = [v for v in self.variables if v not in variables]
        if missing:
            raise ValueError(f"variables {missing} would be lost")
        positions = [list(variables).index(v) for v in self.variables]
        terms = {}
        for exps, c in self._terms.items():
            new = [0] * len(variables)
            for position, e in zip(positions, exps):
                new[position] = e
            terms[tuple(new)] = c
        return MultiSeries.make(variables, orders, terms)

    def rename(self, old: str, new: str) -> "MultiSeries":
        if new in self.variables:
            raise ValueError(f"variable {new!r} already present")
        variables = tuple(new if v == old else v for v in self.variables)
        return MultiSeries.make(variables, self.orders, self._terms)

    def truncate_total(self, variables: Sequence[str], degree: int) -> "MultiSeries":
        """Drop terms whose combined degree in ``variables`` exceeds ``degree``."""
        indexes = [self.variables.index(v) for v in variables]
        return self._like({
            exps: c for exps, c in self._terms.items()
            if sum(exps[i] for i in indexes) <= degree
        })

    def substitute(self, var: str, replacement: "MultiSeries") -> "MultiSeries":
        """
        Replace ``var`` by a series with zero constant term.

        The result lives over the remaining variables of self followed by the
        new variables of ``replacement``; shared variables must carry equal
        orders.

        Raises:
            SeriesDomainError: If replacement has a nonzero constant term
            OrderMismatchError: If a shared variable has two different orders
        """
        if replacement.constant_term():
            raise SeriesDomainError(f"substitution for {var!r} requires zero constant term")
        index = self.variables.index(var)
        variables = [v for v in self.variables if v != var]
        orders = [o for v, o in zip(self.variables, self.orders) if v != var]
        for v, o in zip(replacement.variables, replacement.orders):
            if v in variables:
                if orders[variables.index(v)] != o:
                    raise OrderMismatchError(f"variable {v!r} has orders {orders[variables.index(v)]} and {o}")
            else:
                variables.append(v)
                orders.append(o)
        target = replacement.extend(variables, orders)
        grouped: Dict[int, Dict[Exponents, Fraction]] = {}
        for exps, c in self._terms.items():
            rest = exps[:index] + exps[index + 1:]
            grouped.setdefault(exps[index], {})[rest] = c
        result = MultiSeries.make(variables, orders)
        power = MultiSeries.constant(1, variables, orders)
        for p in range(max(grouped, default=-1) + 1):
            if p in grouped:
                part = MultiSeries.make(self.variables[:index] + self.variables[index + 1:],
                                        self.orders[:index] + self.orders[index + 1:],
                                        grouped[p]).extend(variables, orders)
                result = result + part * power
            power = power * target
            if power.is_zero():
                break
        return result

    # -- serialization ------------------------------------------------

    def to_json(self) -> Dict[str, Any]:
        return {
            "vars": list(self.variables),
            "orders": list(self.orders),
            "terms": [
                {"exps": list(exps), **rational_to_json(c)}
                for exps, c in sorted(self._terms.items())
            ],
        }

    @classmethod
    def from_json(cls, data: Mapping[str, Any]) -> "MultiSeries":
        terms = {tuple(t["exps"]): rational_from_json(t) for t in data["terms"]}
        return cls.make(data["vars"], data["orders"], terms)


class BivSeries(MultiSeries):
    """Two-variable series with a dense rectangular view."""

    def __init__(self, variables: Sequence[str], orders: Sequence[int], terms=None):
        if len(variables) != 2:
            raise ValueError(f"BivSeries needs two variables, got {list(variables)!r}")
        super().__init__(variables, orders, terms)

    @classmethod
    def from_dense(cls, variables: Sequence[str], coeffs: Sequence[Sequence[Any]]) -> "BivSeries":
        """coeffs[i][j] multiplies v0**i * v1**j."""
        orders = (len(coeffs) - 1, len(coeffs[0]) - 1)
        terms = {(i, j): c for i, row in enumerate(coeffs) for j, c in enumerate(row)}
        return cls(variables, orders, terms)

    @property
    def coeffs(self) -> List[List[Fraction]]:
        return [
            [self.coefficient(i, j) for j in range(self.orders[1] + 1)]
            for i in range(self.orders[0] + 1)
        ]

    def row(self, i: int) -> TruncSeries:
        """Coefficient of v0**i as a series in v1."""
        return TruncSeries([self.coefficient(i, j) for j in range(self.orders[1] + 1)],
                           order=self.orders[1], var=self.variables[1])

    def column(self, j: int) -> TruncSeries:
        """Coefficient of v1**j as a series in v0."""
        return TruncSeries([self.coefficient(i, j) for i in range(self.orders[0] + 1)],
                           order=self.orders[0], var=self.variables[0])


def monomial_substitution(f: TruncSeries, variables: Sequence[str], orders: Sequence[int],
                          exps: Sequence[int]) -> MultiSeries:
    """
    f(t) with t replaced by the monomial prod v_i**exps_i.

    Used for g(lambda * x**e): terms past any variable's order are dropped.
    """
    terms = {}
    for n, c in enumerate(f):
        key = tuple(n * e for e in exps)
        terms[key] = c
    return MultiSeries.make(variables, orders, terms)


SeriesLike = Union[TruncSeries, MultiSeries]

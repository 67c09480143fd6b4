"""
Substitutions with prefunctions and their one-parameter groups.

A PrefSub U acts on series by U[f] = g * (f o s), where g and s are series in
a formal parameter (lambda, possibly also theta) and x. The exponential of a
one-annihilator operator q(x) d/dx + v(x) is such a substitution; for the
monomial field q = alpha x^m, v = beta x^(m-1) it has a closed form.
"""

import logging
from fractions import Fraction
from typing import Any, Dict, Optional, Sequence, Tuple

from .endomatrix import LAMBDA, THETA, apply_series, exp_lambda
from .errors import FieldError, NotHomogeneousError, OrderMismatchError
from .exact import Rational, format_rational, to_fraction
from .hw_core import NormalForm, excess_of
from .reports import CheckReport
from .series import MultiSeries, TruncSeries, monomial_substitution
from .stirling import at_most_one_annihilator, egf_extract, stirling_table

logger = logging.getLogger(__name__)

X = "x"


class PrefSub:
    """
    Pair (g, s) with g = 1 and s = x at parameter zero.

    Attributes:
        g: Prefunction, a MultiSeries over params + (x,)
        s: Substitution, same variables and orders as g, x-valuation >= 1
        params: Formal parameter names, ("lambda",) or ("lambda", "theta")
    """

    def __init__(self, g: MultiSeries, s: MultiSeries, params: Sequence[str] = (LAMBDA,)):
        self.params: Tuple[str, ...] = tuple(params)
        expected = self.params + (X,)
        if g.variables != expected or s.variables != expected:
            raise OrderMismatchError(f"prefunction and substitution must be over {expected}")
        if g.orders != s.orders:
            raise OrderMismatchError(f"g has orders {g.orders}, s has {s.orders}")
        self.g = g
        self.s = s
        self._validate()

    def _validate(self) -> None:
        zero = len(self.params)
        g0 = {exps[zero:]: c for exps, c in self.g.terms.items() if not any(exps[:zero])}
        s0 = {exps[zero:]: c for exps, c in self.s.terms.items() if not any(exps[:zero])}
        if g0 != {(0,): 1}:
            raise FieldError("prefunction must equal 1 at parameter zero")
        if self.x_order >= 1 and s0 != {(1,): 1}:
            raise FieldError("substitution must equal x at parameter zero")
        valuation = self.s.valuation_in(X)
        if valuation is not None and valuation < 1:
            raise FieldError("substitution must have x-valuation at least 1")

    @classmethod
    def identity(cls, lambda_order: int, x_order: int) -> "PrefSub":
        variables, orders = (LAMBDA, X), (lambda_order, x_order)
        return cls(MultiSeries.constant(1, variables, orders), MultiSeries.variable(X, variables, orders))

    @property
    def lambda_order(self) -> int:
        return self.g.orders[0]

    @property
    def x_order(self) -> int:
        return self.g.orders[-1]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PrefSub):
            return NotImplemented
        return (self.params, self.g, self.s) == (other.params, other.g, other.s)

    def __repr__(self) -> str:
        return f"PrefSub(params={self.params}, lambda_order={self.lambda_order}, x_order={self.x_order})"

    def shift_parameter(self) -> "PrefSub":
        """U at lambda + theta, over (lambda, theta, x)."""
        if self.params != (LAMBDA,):
            raise ValueError("shift_parameter needs a single lambda parameter")
        variables = (LAMBDA, THETA)
        orders = (self.lambda_order, self.lambda_order)
        shift = MultiSeries.variable(LAMBDA, variables, orders) + MultiSeries.variable(THETA, variables, orders)
        target = (LAMBDA, THETA, X)
        target_orders = (self.lambda_order, self.lambda_order, self.x_order)
        g = self.g.substitute(LAMBDA, shift).extend(target, target_orders)
        s = self.s.substitute(LAMBDA, shift).extend(target, target_orders)
        return PrefSub(g, s, params=(LAMBDA, THETA))

    def leading_terms(self, count: int = 6) -> Dict[str, str]:
        """Short text of the lowest terms of g and s, for display."""
        return {"g": _leading(self.g, count), "s": _leading(self.s, count)}

    def to_json(self) -> Dict[str, Any]:
        return {
            "params": list(self.params),
            "lambda_order": self.lambda_order,
            "x_order": self.x_order,
            "g": self.g.to_json(),
            "s": self.s.to_json(),
        }

    @classmethod
    def from_json(cls, data: Dict[str, Any]) -> "PrefSub":
        return cls(MultiSeries.from_json(data["g"]), MultiSeries.from_json(data["s"]),
                   params=tuple(data.get("params", [LAMBDA])))


def _leading(series: MultiSeries, count: int) -> str:
    terms = sorted(series.terms.items(), key=lambda item: (sum(item[0]), item[0]))[:count]
    pieces = []
    for exps, c in terms:
        monomial = " ".join(
            var if e == 1 else f"{var}^{e}"
            for var, e in zip(series.variables, exps) if e
        )
        pieces.append(f"{format_rational(c)} {monomial}".strip())
    return " + ".join(pieces) + " + ..." if pieces else "0"


def apply_prefsub(u: PrefSub, f: TruncSeries) -> MultiSeries:
    """
    g * (f o s).

    Raises:
        OrderMismatchError: If f is not at the x-order of u
    """
    if f.order != u.x_order:
        raise OrderMismatchError(f"series of order {f.order} against substitution of x-order {u.x_order}")
    embedded = MultiSeries.from_trunc(f.with_var(X), (X,), (f.order,))
    composed = embedded.substitute(X, u.s).extend(u.g.variables, u.g.orders)
    return u.g * composed


def compose_prefsub(u1: PrefSub, u2: PrefSub, same_parameter: bool = False) -> PrefSub:
    """
    U1 after U2: g = g1 * (g2 o s1), s = s2 o s1.

    By default u2's parameter is renamed to theta so the result lives over
    (lambda, theta, x); with same_parameter both use lambda.
    """
    if (u1.lambda_order, u1.x_order) != (u2.lambda_order, u2.x_order):
        raise OrderMismatchError("substitutions have different orders")
    if u1.params != (LAMBDA,) or u2.params != (LAMBDA,):
        raise ValueError("compose_prefsub expects single-parameter substitutions")
    if same_parameter:
        g2, s2 = u2.g, u2.s
        params = (LAMBDA,)
    else:
        g2, s2 = u2.g.rename(LAMBDA, THETA), u2.s.rename(LAMBDA, THETA)
        params = (LAMBDA, THETA)
    target = params + (X,)
    orders = tuple(u1.lambda_order for _ in params) + (u1.x_order,)
    g1 = u1.g.extend(target, orders)
    g = g1 * g2.substitute(X, u1.s).extend(target, orders)
    s = s2.substitute(X, u1.s).extend(target, orders)
    return PrefSub(g, s, params=params)


def group_law_check(u: PrefSub) -> CheckReport:
    """
    U at lambda after U at theta against U at lambda + theta.

    Compared through total parameter degree lambda_order.
    """
    left = compose_prefsub(u, u)
    right = u.shift_parameter()
    report = CheckReport(name="group law")
    params = (LAMBDA, THETA)
    for label, a, b in (("g", left.g, right.g), ("s", left.s, right.s)):
        a = a.truncate_total(params, u.lambda_order)
        b = b.truncate_total(params, u.lambda_order)
        for exps in sorted(set(a.terms) | set(b.terms)):
            report.record((label,) + exps, a.coefficient(*exps), b.coefficient(*exps))
    return report.log()


def integrate_monomial(alpha: Rational, m: int, beta: Rational, lambda_order: int, x_order: int) -> PrefSub:
    """
    Closed-form group of alpha x^m d/dx + beta x^(m-1).

    With c = alpha (m - 1) and t = lambda x^(m-1):
    s = x (1 - c t)^(-1/(m-1)) and g = (1 - c t)^(-beta/c).

    Raises:
        FieldError: If m < 2 or alpha = 0
    """
    alpha, beta = to_fraction(alpha), to_fraction(beta)
    if m < 2:
        raise FieldError(f"monomial fields need m >= 2, got m = {m}")
    if alpha == 0:
        raise FieldError("alpha must be nonzero")
    c = alpha * (m - 1)
    base = TruncSeries([1, -c], order=lambda_order, var="t")
    variables, orders = (LAMBDA, X), (lambda_order, x_order)
    exps = (1, m - 1)
    s_factor = monomial_substitution(base.binom_pow(Fraction(-1, m - 1)), variables, orders, exps)
    g = monomial_substitution(base.binom_pow(-beta / c), variables, orders, exps)
    s = s_factor * MultiSeries.variable(X, variables, orders)
    logger.debug(f"Integrated {format_rational(alpha)} x^{m} d/dx + {format_rational(beta)} x^{m - 1}")
    return PrefSub(g, s)


def _field_apply(q: TruncSeries, v: Optional[TruncSeries], h: TruncSeries) -> TruncSeries:
    """(q d/dx + v) h at h's order; q(0) = 0 keeps the top coefficient exact."""
    order = h.order
    out = []
    for n in range(order + 1):
        total = Fraction(0)
        for i in range(1, n + 1):
            total += q[i] * (n - i + 1) * h[n - i + 1]
        out.append(total)
    result = TruncSeries(out, order=order, var=h.var)
    if v is not None:
        result = result + v * h
    return result


def lie_series(q: TruncSeries, v: TruncSeries, lambda_order: int) -> PrefSub:
    """
    Group of q(x) d/dx + v(x) as formal exponentials, for q(0) = 0.

    s = sum lambda^n/n! (q D)^n x and g = sum lambda^n/n! (q D + v)^n 1.
    """
    if q[0]:
        raise FieldError("lie_series needs q(0) = 0")
    if q.order != v.order:
        raise OrderMismatchError(f"q has order {q.order}, v has order {v.order}")
    order = q.order
    q, v = q.with_var(X), v.with_var(X)
    s_terms: Dict[Tuple[int, int], Fraction] = {}
    g_terms: Dict[Tuple[int, int], Fraction] = {}
    s_power = TruncSeries.monomial(1, order, var=X)
    g_power = TruncSeries.constant(1, order, var=X)
    scale = Fraction(1)
    for n in range(lambda_order + 1):
        if n:
            scale /= n
            s_power = _field_apply(q, None, s_power)
            g_power = _field_apply(q, v, g_power)
        for k in range(order + 1):
            s_terms[(n, k)] = s_power[k] * scale
            g_terms[(n, k)] = g_power[k] * scale
    variables, orders = (LAMBDA, X), (lambda_order, order)
    return PrefSub(MultiSeries.make(variables, orders, g_terms), MultiSeries.make(variables, orders, s_terms))


def tangent_check(u: PrefSub, q: TruncSeries, v: TruncSeries) -> CheckReport:
    """The lambda^1 coefficient of U[x^j] against q (x^j)' + v x^j, for j <= x_order."""
    if u.lambda_order < 1:
        raise OrderMismatchError("tangent check needs lambda order at least 1")
    if q.order != u.x_order or v.order != u.x_order:
        raise OrderMismatchError("q and v must be given at the x-order of the substitution")
    q, v = q.with_var(X), v.with_var(X)
    report = CheckReport(name="tangent")
    for j in range(u.x_order + 1):
        f = TruncSeries.monomial(j, u.x_order, var=X)
        slope = TruncSeries.monomial(j - 1, u.x_order, coeff=j, var=X) if j else TruncSeries.zero(u.x_order, X)
        expected = q * slope + v * f
        image = apply_prefsub(u, f).slice(LAMBDA, 1).to_trunc()
        for n in range(u.x_order + 1):
            report.record((j, n), image[n], expected[n])
    return report.log()


def prop2_bridge(omega: NormalForm, lambda_order: int, x_order: int) -> CheckReport:
    """
    Substitution built from the Stirling table against exp(lambda omega).

    With (g, phi) from the first two table columns and e the excess,
    U[f](x) = g(lambda x^e) f(x (1 + phi(lambda x^e))) is compared with the
    matrix exponential applied to x^j, j <= x_order, on its exact entries.

    Raises:
        NotHomogeneousError: If omega is zero or mixes excesses
        FieldError: If e < 0 or a word has two or more annihilators
    """
    excess = excess_of(omega)
    if not excess.homogeneous:
        raise NotHomogeneousError(f"operator is {excess}: {omega}")
    e = excess.value
    if e < 0:
        raise FieldError(f"negative excess {e} has no substitution form")
    if not at_most_one_annihilator(omega):
        raise FieldError("operator has a word with two or more annihilators")
    table = stirling_table(omega, lambda_order)
    g, phi = egf_extract(table, lambda_order)
    variables, orders = (LAMBDA, X), (lambda_order, x_order)
    prefunction = monomial_substitution(g, variables, orders, (1, e))
    x = MultiSeries.variable(X, variables, orders)
    substitution = x + monomial_substitution(phi, variables, orders, (1, e)) * x
    u = PrefSub(prefunction, substitution)
    matrix = exp_lambda(omega, x_order, lambda_order)
    report = CheckReport(name="stirling bridge")
    for j in range(x_order + 1):
        f = TruncSeries.monomial(j, x_order, var=X)
        from_table = apply_prefsub(u, f)
        from_matrix = apply_series(matrix, f)
        for n in range(x_order + 1):
            if not matrix.is_exact(n, j):
                continue
            for power in range(lambda_order + 1):
                report.record((j, n, power), from_table.coefficient(power, n), from_matrix.coefficient(power, n))
    return report.log()

"""
Generalized Stirling tables of homogeneous operators.

For Omega of excess e >= 0 the normal form of Omega**n is

    (a+)^(n e) * sum_k S(n, k) (a+)^k a^k

and for e < 0 the powers of a^(|e|) sit on the right instead. The exponential
generating function sum S(n,k) x^n/n! y^k factors as g(x) exp(y phi(x)) when
every word of Omega has at most one annihilator.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Any, Dict, List, Optional, Tuple

from .errors import NotHomogeneousError, OrderMismatchError, SeriesDomainError, ShapeError
from .exact import rational_from_json, rational_to_json
from .hw_core import NormalForm, excess_of, normal_powers
from .reports import CheckReport
from .series import TruncSeries

logger = logging.getLogger(__name__)


@dataclass
class StirlingTable:
    """
    Rows S(n, 0..width(n)-1) for n = 0..n_max, trailing zeros trimmed.

    Attributes:
        excess: Grading degree e of the operator
        rows: Exact entries, row 0 is always [1]
        operator: The operator the table was computed from, when known
    """

    excess: int
    rows: List[List[Fraction]]
    operator: Optional[NormalForm] = field(default=None, compare=False)

    @property
    def n_max(self) -> int:
        return len(self.rows) - 1

    def width(self, n: int) -> int:
        return len(self.rows[n])

    def entry(self, n: int, k: int) -> Fraction:
        row = self.rows[n]
        return row[k] if 0 <= k < len(row) else Fraction(0)

    def is_integral(self) -> bool:
        return all(value.denominator == 1 for row in self.rows for value in row)

    def is_nonnegative(self) -> bool:
        return all(value >= 0 for row in self.rows for value in row)

    def padded_rows(self) -> List[List[Fraction]]:
        """Rows padded with zeros to a common width."""
        width = max(len(row) for row in self.rows)
        return [row + [Fraction(0)] * (width - len(row)) for row in self.rows]

    def to_json(self) -> Dict[str, Any]:
        return {
            "excess": self.excess,
            "rows": [[rational_to_json(value) for value in row] for row in self.rows],
        }

    @classmethod
    def from_json(cls, data: Dict[str, Any]) -> "StirlingTable":
        return cls(
            excess=int(data["excess"]),
            rows=[[rational_from_json(value) for value in row] for row in data["rows"]],
        )

    @classmethod
    def from_normal_powers(cls, powers: List[NormalForm], excess: int,
                           operator: Optional[NormalForm] = None) -> "StirlingTable":
        """Read S(n, k) off the normal forms N(Omega^0), ..., N(Omega^n_max)."""
        rows = [_read_row(power, n, excess) for n, power in enumerate(powers)]
        return cls(excess=excess, rows=rows, operator=operator)


def _read_row(power: NormalForm, n: int, excess: int) -> List[Fraction]:
    entries: Dict[int, Fraction] = {}
    for (i, j), coeff in power.terms.items():
        if excess >= 0:
            k = j
            if i != n * excess + k:
                raise ShapeError(f"term (a+)^{i} a^{j} of N(Omega^{n}) does not fit excess {excess}")
        else:
            k = i
            if j != k + n * (-excess):
                raise ShapeError(f"term (a+)^{i} a^{j} of N(Omega^{n}) does not fit excess {excess}")
        entries[k] = coeff
    width = max(entries, default=-1) + 1
    return [entries.get(k, Fraction(0)) for k in range(width)]


def stirling_table(omega: NormalForm, n_max: int) -> StirlingTable:
    """
    Generalized Stirling table of a homogeneous operator.

    Args:
        omega: Homogeneous normal form
        n_max: Last row to compute

    Returns:
        StirlingTable with rows 0..n_max

    Raises:
        NotHomogeneousError: If omega is zero or mixes excesses
        ShapeError: If a power has a term off the predicted shape
    """
    excess = excess_of(omega)
    if not excess.homogeneous:
        logger.error(f"❌ Operator {omega} is {excess}")
        raise NotHomogeneousError(f"operator is {excess}: {omega}")
    powers = normal_powers(omega, n_max)
    table = StirlingTable.from_normal_powers(powers, excess.value, operator=omega)
    logger.debug(f"Stirling table of {omega}: excess {excess.value}, {len(table.rows)} rows")
    return table


def at_most_one_annihilator(omega: NormalForm) -> bool:
    """True when every word of omega carries a^0 or a^1."""
    return all(j <= 1 for _, j in omega.terms)


def egf_extract(table: StirlingTable, order: int) -> Tuple[TruncSeries, TruncSeries]:
    """
    Recover (g, phi) from the first two columns of a table.

    g = sum S(n,0) x^n/n! and phi = (sum S(n,1) x^n/n!) / g.

    Raises:
        OrderMismatchError: If the table has fewer than order + 1 rows
    """
    if table.n_max < order:
        raise OrderMismatchError(f"table has rows through {table.n_max}, need {order}")
    g = TruncSeries([table.entry(n, 0) / factorial(n) for n in range(order + 1)], order=order)
    first = TruncSeries([table.entry(n, 1) / factorial(n) for n in range(order + 1)], order=order)
    phi = first / g
    return g, phi


def sheffer_check(table: StirlingTable, g: TruncSeries, phi: TruncSeries) -> CheckReport:
    """
    Compare every S(n, k), n <= order, with n! [x^n] g phi^k / k!.

    Entries with k > n are predicted zero because phi has no constant term.

    Raises:
        SeriesDomainError: If g(0) != 1 or phi(0) != 0
    """
    if g[0] != 1 or phi[0] != 0:
        raise SeriesDomainError("sheffer_check needs g(0) = 1 and phi(0) = 0")
    in_scope = table.operator is None or at_most_one_annihilator(table.operator)
    report = CheckReport(name="sheffer", in_scope=in_scope)
    last = min(g.order, table.n_max)
    max_k = max(max(table.width(n) - 1, n) for n in range(last + 1))
    column = g
    for k in range(max_k + 1):
        for n in range(last + 1):
            report.record((n, k), table.entry(n, k), factorial(n) * column[n] / factorial(k))
        column = column * phi
    return report.log()


@lru_cache(maxsize=None)
def classical_stirling2(n: int, k: int) -> int:
    """Stirling numbers of the second kind by S(n+1,k) = k S(n,k) + S(n,k-1)."""
    if n < 0 or k < 0:
        return 0
    if n == 0:
        return 1 if k == 0 else 0
    if k == 0:
        return 0
    return k * classical_stirling2(n - 1, k) + classical_stirling2(n - 1, k - 1)

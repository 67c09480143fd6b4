"""
Ladder operators relative to bases, and expansions of endomorphisms in them.

Everything lives in a working coordinate space of dimension W+1, where
W = N + margin: a BasisMat holds basis vectors as columns in those
coordinates. Relative operators satisfy

    L_{b,beta} b_n = beta_n b_(n-1)        R_{a,alpha} a_n = alpha_n a_(n+1)

and an endomorphism phi with b_0 in K a_0 expands as
phi = sum_n P_n(R_{a,alpha}) L_{b,beta}^n. Rescaling a'_n = (prod_{i<n} alpha_i) a_n
and b'_n = b_n / prod_{i<=n} beta_i turns both operators into plain shifts,
and in a'-coordinates a polynomial P is its own coefficient vector.
"""

import logging
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence

import sympy

from . import linalg
from .endomatrix import OpMatrix
from .errors import (BasisMismatchError, CoefficientError, ExpansionError, FieldError, OrderMismatchError,
                     SingularBasisError)
from .exact import format_rational, rational_from_json, rational_to_json, to_fraction
from .reports import CheckReport

logger = logging.getLogger(__name__)

ALPHA = "alpha"
BETA = "beta"


class BasisMat:
    """Invertible matrix whose column n holds the working coordinates of basis vector n."""

    def __init__(self, columns_matrix: Sequence[Sequence[Any]], name: str = "custom"):
        self.entries: linalg.Matrix = [[to_fraction(v) for v in row] for row in columns_matrix]
        if any(len(row) != len(self.entries) for row in self.entries):
            raise OrderMismatchError("basis matrix must be square")
        found = linalg.rank(self.entries)
        if found < len(self.entries):
            raise SingularBasisError(f"basis matrix has rank {found}, needs {len(self.entries)}")
        self.inverse = linalg.inverse(self.entries)
        self.name = name

    @classmethod
    def standard(cls, w: int) -> "BasisMat":
        """e_n = x^n."""
        return cls(linalg.identity(w + 1), name="standard")

    @classmethod
    def factorial(cls, w: int) -> "BasisMat":
        """e_n = x^n / n!."""
        values = [Fraction(1)]
        for n in range(1, w + 1):
            values.append(values[-1] / n)
        return cls(linalg.diagonal(values), name="factorial")

    @classmethod
    def scaled(cls, basis: "BasisMat", factors: Sequence[Any]) -> "BasisMat":
        """Basis with vector n multiplied by factors[n]."""
        factors = [to_fraction(f) for f in factors]
        return cls(linalg.matmul(basis.entries, linalg.diagonal(factors[: basis.dim])), name=f"scaled {basis.name}")

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[Any]], name: str = "custom") -> "BasisMat":
        return cls(linalg.transpose([[to_fraction(v) for v in col] for col in columns]), name=name)

    @property
    def dim(self) -> int:
        return len(self.entries)

    @property
    def w(self) -> int:
        return self.dim - 1

    def column(self, n: int) -> linalg.Vector:
        return [row[n] for row in self.entries]

    def as_matrix(self) -> OpMatrix:
        return OpMatrix(self.entries)

    def inverse_matrix(self) -> OpMatrix:
        return OpMatrix(self.inverse)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BasisMat):
            return NotImplemented
        return self.entries == other.entries

    def __repr__(self) -> str:
        return f"BasisMat({self.name}, dim={self.dim})"

    def to_json(self) -> Dict[str, Any]:
        return {"dim": self.dim, "columns": [[rational_to_json(v) for v in self.column(n)] for n in range(self.dim)]}

    @classmethod
    def from_json(cls, data: Dict[str, Any]) -> "BasisMat":
        return cls.from_columns([[rational_from_json(v) for v in col] for col in data["columns"]])


class CoeffSeq:
    """
    Nonzero ladder coefficients.

    Role ``alpha`` feeds a raising operator, role ``beta`` a lowering one and
    then starts with beta_0 = 1.
    """

    def __init__(self, values: Sequence[Any], role: str):
        if role not in (ALPHA, BETA):
            raise CoefficientError(f"unknown role {role!r}")
        self.values: List[Fraction] = [to_fraction(v) for v in values]
        self.role = role
        if any(v == 0 for v in self.values):
            raise CoefficientError(f"{role} coefficients must be nonzero")
        if role == BETA and self.values and self.values[0] != 1:
            raise CoefficientError(f"beta_0 must be 1, got {format_rational(self.values[0])}")

    @classmethod
    def ones(cls, length: int, role: str) -> "CoeffSeq":
        return cls([1] * length, role)

    @classmethod
    def derivative(cls, length: int) -> "CoeffSeq":
        """beta = (1, 1, 2, 3, ...): lowering by d/dx on x^n."""
        return cls([1] + list(range(1, length)), BETA)

    def __getitem__(self, n: int) -> Fraction:
        return self.values[n]

    def __len__(self) -> int:
        return len(self.values)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CoeffSeq):
            return NotImplemented
        return (self.values, self.role) == (other.values, other.role)

    def __repr__(self) -> str:
        return f"CoeffSeq({self.role}, [{', '.join(format_rational(v) for v in self.values)}])"

    def prefix(self, length: int) -> "CoeffSeq":
        return CoeffSeq(self.values[:length], self.role)

    def to_json(self) -> Dict[str, Any]:
        return {"role": self.role, "values": [rational_to_json(v) for v in self.values]}

    @classmethod
    def from_json(cls, data: Dict[str, Any]) -> "CoeffSeq":
        return cls([rational_from_json(v) for v in data["values"]], data["role"])


class PolySeq:
    """Polynomials P_0..P_N as coefficient lists (index i multiplies x^i)."""

    def __init__(self, polys: Sequence[Sequence[Any]]):
        self.polys: List[List[Fraction]] = [_trim([to_fraction(c) for c in p]) for p in polys]

    def __getitem__(self, n: int) -> List[Fraction]:
        return self.polys[n]

    def __len__(self) -> int:
        return len(self.polys)

    def __iter__(self):
        return iter(self.polys)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PolySeq):
            return NotImplemented
        return self.polys == other.polys

    def __repr__(self) -> str:
        return f"PolySeq({len(self.polys)} polynomials)"

    def degree(self, n: int) -> int:
        return len(self.polys[n]) - 1

    def as_sympy(self, n: int, symbol: str = "x") -> sympy.Expr:
        x = sympy.Symbol(symbol)
        return sum(
            (sympy.Rational(c.numerator, c.denominator) * x ** i for i, c in enumerate(self.polys[n])),
            sympy.Integer(0),
        )

    def to_latex(self, symbol: str = "x") -> List[str]:
        """One ``P_{n}(x) = ...`` line per polynomial, factored where sympy can."""
        return [
            f"P_{{{n}}}({symbol}) = {sympy.latex(sympy.factor(self.as_sympy(n, symbol)))}"
            for n in range(len(self.polys))
        ]

    def to_json(self) -> Dict[str, Any]:
        return {"polys": [[rational_to_json(c) for c in p] for p in self.polys]}

    @classmethod
    def from_json(cls, data: Dict[str, Any]) -> "PolySeq":
        return cls([[rational_from_json(c) for c in p] for p in data["polys"]])


def _trim(values: List[Fraction]) -> List[Fraction]:
    while values and values[-1] == 0:
        values.pop()
    return values


def _prefix_products(values: Sequence[Fraction], count: int) -> List[Fraction]:
    """[prod_{i<n} values_i for n in 0..count-1]."""
    products = [Fraction(1)]
    for n in range(1, count):
        products.append(products[-1] * values[n - 1])
    return products


def _conjugate(basis: BasisMat, core: OpMatrix) -> OpMatrix:
    """Working-coordinate matrix of an operator given in basis coordinates."""
    return basis.as_matrix().compose(core).compose(basis.inverse_matrix())


def _require_length(seq: CoeffSeq, length: int, what: str) -> None:
    if len(seq) < length:
        raise CoefficientError(f"{what} needs {length} coefficients, got {len(seq)}")


# -- ladder operators -------------------------------------------------


def lowering(b: BasisMat, beta: CoeffSeq) -> OpMatrix:
    """
    L b_n = beta_n b_(n-1), L b_0 = 0, in working coordinates.

    The top row is incomplete: L b_(W+1) is outside the window.
    """
    _require_length(beta, b.dim, "lowering")
    size = b.dim
    core = [[Fraction(0)] * size for _ in range(size)]
    for n in range(1, size):
        core[n - 1][n] = beta[n]
    return _conjugate(b, OpMatrix(core, row_band=size - 2, col_band=size - 1))


def raising(a: BasisMat, alpha: CoeffSeq) -> OpMatrix:
    """
    R a_n = alpha_n a_(n+1) in working coordinates.

    R a_W leaves the window, so every column that reaches a_W is inexact.
    """
    _require_length(alpha, a.dim - 1, "raising")
    size = a.dim
    core = [[Fraction(0)] * size for _ in range(size)]
    for n in range(size - 1):
        core[n + 1][n] = alpha[n]
    return _conjugate(a, OpMatrix(core, row_band=size - 1, col_band=size - 2))


def diagonal_op(alpha: CoeffSeq, beta: CoeffSeq, n: int) -> OpMatrix:
    """
    Diagonal of [L_beta, R_alpha]: alpha_0 beta_1 at 0, alpha_k beta_(k+1) - alpha_(k-1) beta_k after.

    When beta stops at index n the last entry cannot be formed and is left
    outside the bands.
    """
    if alpha.role != ALPHA or beta.role != BETA:
        raise CoefficientError("diagonal_op expects (alpha, beta) in that order")
    size = n + 1
    _require_length(alpha, size, "diagonal_op")
    _require_length(beta, size, "diagonal_op")
    entries = [[Fraction(0)] * size for _ in range(size)]
    last = n if len(beta) > size else n - 1
    for k in range(last + 1):
        entries[k][k] = alpha[k] * beta[k + 1] - (alpha[k - 1] * beta[k] if k else 0)
    return OpMatrix(entries, row_band=last, col_band=last)


def shift_up(beta: CoeffSeq) -> CoeffSeq:
    """gamma_n = beta_(n+1): coefficients of the transpose of L_beta, a raising operator."""
    return CoeffSeq(beta.values[1:], ALPHA)


def shift_down(alpha: CoeffSeq) -> CoeffSeq:
    """
    gamma_0 = 1, gamma_n = alpha_(n-1): coefficients of the transpose of R_alpha.

    The result is one longer than alpha, so shift_up(shift_down(alpha)) == alpha
    and, since beta_0 = 1, shift_down(shift_up(beta)) == beta.
    """
    return CoeffSeq([1] + alpha.values, BETA)


def transpose_op(matrix: OpMatrix, e: Optional[BasisMat] = None) -> OpMatrix:
    """Transpose in the coordinates of basis e (working coordinates when e is None)."""
    if e is None:
        return matrix.transpose()
    if e.dim != matrix.dim:
        raise OrderMismatchError(f"basis of dimension {e.dim} against matrix of dimension {matrix.dim}")
    in_basis = e.inverse_matrix().compose(matrix).compose(e.as_matrix())
    return _conjugate(e, in_basis.transpose())


def pairing(p: Sequence[Any], s: Sequence[Any]) -> Fraction:
    """<P|S> = sum_i P_i S_i over coordinates."""
    if len(p) != len(s):
        raise OrderMismatchError(f"pairing vectors of lengths {len(p)} and {len(s)}")
    return sum((to_fraction(x) * to_fraction(y) for x, y in zip(p, s)), Fraction(0))


def raise_from_origin(a: BasisMat, alpha: CoeffSeq, n: int) -> linalg.Vector:
    """R^n a_0, which equals (prod_{i<n} alpha_i) a_n for n <= W."""
    r = raising(a, alpha)
    vector = a.column(0)
    for _ in range(n):
        vector = linalg.matvec(r.entries, vector)
    return vector


# -- expansion --------------------------------------------------------


def _scaled_bases(a: BasisMat, alpha: CoeffSeq, b: BasisMat, beta: CoeffSeq):
    if a.dim != b.dim:
        raise OrderMismatchError(f"bases have dimensions {a.dim} and {b.dim}")
    _require_length(alpha, a.dim - 1, "expansion")
    _require_length(beta, b.dim, "expansion")
    a_scale = _prefix_products(alpha.values, a.dim)
    b_scale = [1 / p for p in _prefix_products(beta.values[1:], b.dim)]
    ca = linalg.matmul(a.entries, linalg.diagonal(a_scale))
    cb = linalg.matmul(b.entries, linalg.diagonal(b_scale))
    return ca, cb


def _origin_ratio(ca: linalg.Matrix, cb: linalg.Matrix) -> Fraction:
    """lam with b_0 = lam a_0, exactly."""
    a0 = [row[0] for row in ca]
    b0 = [row[0] for row in cb]
    pivot = next(i for i, v in enumerate(a0) if v != 0)
    lam = b0[pivot] / a0[pivot]
    if lam == 0 or any(bv != lam * av for av, bv in zip(a0, b0)):
        raise BasisMismatchError("b_0 is not a nonzero multiple of a_0")
    return lam


def _convolve(p: Sequence[Fraction], y: Sequence[Fraction], size: int) -> List[Fraction]:
    """Coordinates of P(R) y for the plain down-shift R, truncated to size."""
    out = [Fraction(0)] * size
    for i, c in enumerate(p):
        if not c:
            continue
        for k in range(size - i):
            if y[k]:
                out[k + i] += c * y[k]
    return out


def expand_endo(phi: OpMatrix, a: BasisMat, alpha: CoeffSeq, b: BasisMat, beta: CoeffSeq, n: int) -> PolySeq:
    """
    P_0..P_n with phi = sum P_k(R_{a,alpha}) L_{b,beta}^k.

    Recursion in a'-coordinates: lam P_0 = phi(b'_0) and
    lam P_(m) = phi(b'_m) - sum_{k<m} P_k(R) b'_(m-k).

    Raises:
        BasisMismatchError: If b_0 is not a nonzero multiple of a_0
        SingularBasisError: From BasisMat when a basis is singular
    """
    if phi.dim != a.dim:
        raise OrderMismatchError(f"matrix of dimension {phi.dim} against bases of dimension {a.dim}")
    if n > a.w:
        raise OrderMismatchError(f"cannot expand to index {n} in working degree {a.w}")
    ca, cb = _scaled_bases(a, alpha, b, beta)
    lam = _origin_ratio(ca, cb)
    size = a.dim
    ca_inv = linalg.inverse(ca)
    y = linalg.matmul(ca_inv, cb)
    images = linalg.matmul(ca_inv, linalg.matmul(phi.entries, cb))
    trusted = phi.row_band >= phi.n
    polys: List[List[Fraction]] = []
    for m in range(n + 1):
        if not trusted and any(cb[s][m] and s > phi.col_band for s in range(size)):
            logger.warning(f"⚠️ expansion index {m} uses inexact columns of phi")
        residual = [row[m] for row in images]
        for k, poly in enumerate(polys):
            correction = _convolve(poly, [row[m - k] for row in y], size)
            residual = [r - c for r, c in zip(residual, correction)]
        polys.append([value / lam for value in residual])
        logger.debug(f"expand_endo: P_{m} has degree {len(_trim(list(polys[-1]))) - 1}")
    return PolySeq(polys)


def reconstruct(p: PolySeq, a: BasisMat, alpha: CoeffSeq, b: BasisMat, beta: CoeffSeq) -> OpMatrix:
    """
    sum_k P_k(R_{a,alpha}) L_{b,beta}^k in working coordinates.

    Column m of the sum on b'_m needs P_0..P_m, so only the columns whose
    b'-expansion stays within the given P are trusted.
    """
    ca, cb = _scaled_bases(a, alpha, b, beta)
    size = a.dim
    ca_inv = linalg.inverse(ca)
    y = linalg.matmul(ca_inv, cb)
    known = len(p) - 1
    core = [[Fraction(0)] * size for _ in range(size)]
    for m in range(min(known, size - 1) + 1):
        column = [Fraction(0)] * size
        for k in range(m + 1):
            padded = list(p[k]) + [Fraction(0)] * max(0, size - len(p[k]))
            term = _convolve(padded[:size], [row[m - k] for row in y], size)
            column = [c + t for c, t in zip(column, term)]
        for r in range(size):
            core[r][m] = column[r]
    in_b_coords = OpMatrix(core, row_band=-1, col_band=known)
    return OpMatrix(ca).compose(in_b_coords).compose(OpMatrix(linalg.inverse(cb)))


def km_expand(phi: OpMatrix, n: int) -> PolySeq:
    """
    Expansion phi = sum P_k(X) D^k by the polynomial recursion
    P_m = phi(x^m/m!) - sum_{k<m} P_k x^(m-k)/(m-k)!.
    """
    size = phi.dim
    if n > size - 1:
        raise OrderMismatchError(f"cannot expand to index {n} in dimension {size}")
    polys: List[List[Fraction]] = []
    fact = Fraction(1)
    for m in range(n + 1):
        if m:
            fact *= m
        poly = [phi.entries[r][m] / fact for r in range(size)]
        inv = Fraction(1)
        for j in range(1, m + 1):
            inv /= j
            previous = polys[m - j]
            for i, c in enumerate(previous):
                if c and i + j < size:
                    poly[i + j] -= c * inv
        polys.append(poly)
    return PolySeq(polys)


def _run_product(values: Sequence[Fraction], start: int, stop: int) -> Fraction:
    product = Fraction(1)
    for t in range(start, stop):
        product *= values[t]
    return product


def _continuous_core(p: PolySeq, size: int, up: Sequence[Fraction], down: Sequence[Fraction]) -> OpMatrix:
    """The hat-operator sum in e-coordinates; row r uses P_0..P_r."""
    core = [[Fraction(0)] * size for _ in range(size)]
    for r in range(size):
        for k in range(min(r, len(p) - 1) + 1):
            start = r - k
            poly = p[k]
            lift = _run_product(up, start, r)
            for c in range(start, min(size, start + len(poly))):
                coeff = poly[c - start]
                if coeff:
                    core[r][c] += lift * coeff * _run_product(down, start + 1, c + 1)
    return OpMatrix(core, row_band=min(len(p) - 1, size - 1), col_band=-1)


def continuous_reconstruct(p: PolySeq, e: BasisMat, raise_coeffs: CoeffSeq, lower_coeffs: CoeffSeq) -> OpMatrix:
    """
    sum_k R_hat^k P_k(L_hat) with R_hat = R_{e,raise_coeffs}, L_hat = L_{e,lower_coeffs}.

    In e-coordinates R_hat^k L_hat^i sends e_c to a multiple of e_(c-i+k), so
    entry (r, c) collects k <= r with i = c - r + k. Row r needs P_0..P_r;
    rows beyond len(p) - 1 are left outside the bands. The bands describe the
    e-coordinate matrix and may not survive conjugation by a non-diagonal e.
    """
    size = e.dim
    _require_length(raise_coeffs, size - 1, "continuous raising")
    _require_length(lower_coeffs, size, "continuous lowering")
    return _conjugate(e, _continuous_core(p, size, raise_coeffs.values, lower_coeffs.values))


def continuous_check(psi: OpMatrix, p: PolySeq, e: BasisMat, raise_coeffs: CoeffSeq,
                     lower_coeffs: CoeffSeq, name: str = "continuous reconstruction") -> CheckReport:
    """
    Rows 0..len(p)-1 of sum_k R_hat^k P_k(L_hat) against psi, both in e-coordinates.

    Comparing in working coordinates would lose every row once e mixes them.
    """
    size = e.dim
    _require_length(raise_coeffs, size - 1, "continuous raising")
    _require_length(lower_coeffs, size, "continuous lowering")
    rebuilt = _continuous_core(p, size, raise_coeffs.values, lower_coeffs.values)
    target = linalg.matmul(e.inverse, linalg.matmul(psi.entries, e.entries))
    report = CheckReport(name=name)
    for r in range(rebuilt.row_band + 1):
        for c in range(size):
            report.record((r, c), rebuilt.entries[r][c], target[r][c])
    return report.log()


def continuous_operators(alpha: CoeffSeq, beta: CoeffSeq, corollary: bool = False):
    """(raise, lower) coefficients of the hat operators expand_continuous expands in."""
    if corollary:
        return alpha, beta
    return shift_up(beta), shift_down(alpha)


def expand_continuous(psi: OpMatrix, e: BasisMat, alpha: CoeffSeq, beta: CoeffSeq, n: int,
                      corollary: bool = False) -> PolySeq:
    """
    P_0..P_n with psi = sum R_hat_{e,beta up}^k P_k(L_hat_{e,alpha down}).

    psi must be row-finite inside the window. The P_k come from expanding
    the transpose of psi with a = b = e; rows 0..n of the identity are then
    checked in e-coordinates. With ``corollary`` the given sequences are the
    hat-operator coefficients directly:
    psi = sum R_hat_{e,alpha}^k P_k(L_hat_{e,beta}).

    Raises:
        FieldError: If psi has a row reaching beyond the window
        ExpansionError: If the expansion does not reproduce rows 0..n of psi
    """
    if psi.row_band < psi.n:
        raise FieldError("matrix is not row-finite within the working window")
    raise_hat, lower_hat = continuous_operators(alpha, beta, corollary)
    if corollary:
        alpha, beta = shift_up(beta), shift_down(alpha)
    polys = expand_endo(transpose_op(psi, e), e, alpha, e, beta, n)
    report = continuous_check(psi, polys, e, raise_hat, lower_hat)
    if not report.passed:
        logger.error(f"❌ continuous expansion failed {report.mismatches[0]}")
        raise ExpansionError(f"continuous expansion does not reproduce the matrix: {report.summary()}")
    return polys


# -- commutation rules ------------------------------------------------


def _compare(report: CheckReport, left: OpMatrix, right: OpMatrix) -> CheckReport:
    for r in range(left.dim):
        for k in range(left.dim):
            if left.is_exact(r, k) and right.is_exact(r, k):
                report.record((r, k), left[r, k], right[r, k])
    return report.log()


def commutation_check(b: BasisMat, beta: CoeffSeq, a: BasisMat, alpha: CoeffSeq, n: int) -> CheckReport:
    """L_b R_a - R_a L_b against the reconstruction of its own expansion."""
    commutator = lowering(b, beta).commutator(raising(a, alpha))
    polys = expand_endo(commutator, a, alpha, b, beta, n)
    rebuilt = reconstruct(polys, a, alpha, b, beta)
    return _compare(CheckReport(name="commutation"), commutator, rebuilt)


def diagonal_commutation_check(e: BasisMat, alpha: CoeffSeq, beta: CoeffSeq, n: int) -> CheckReport:
    """
    L_hat R_hat - R_hat L_hat = sum R_hat^k P_k(L_hat) with P_k from the diagonal operator.

    alpha and beta are the hat coefficients (raising and lowering); both need
    e.dim values and n must stay below the top index. Rows 0..n are compared
    in e-coordinates, where the commutator is diagonal.
    """
    if n >= e.w:
        raise OrderMismatchError(f"index {n} leaves no room below working degree {e.w}")
    commutator = lowering(e, beta).commutator(raising(e, alpha))
    diagonal = _conjugate(e, diagonal_op(alpha, beta, e.w))
    # only rows <= n of the diagonal feed the expansion, so its top entry may be open
    rowfinite = OpMatrix(diagonal.entries, row_band=diagonal.n, col_band=diagonal.n)
    polys = expand_continuous(rowfinite, e, alpha, beta, n, corollary=True)
    return continuous_check(commutator, polys, e, alpha, beta, name="diagonal commutation")

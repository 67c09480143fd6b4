import logging
from fractions import Fraction
from math import comb, factorial

import pytest
import sympy

from fixtures.operators import random_coefficients, random_matrix, random_upper_basis
from weylab import ladder
from weylab.endomatrix import OpMatrix
from weylab.errors import BasisMismatchError, ExpansionError, FieldError, OrderMismatchError
from weylab.ladder import (ALPHA, BETA, BasisMat, CoeffSeq, PolySeq, continuous_check, continuous_operators,
                           continuous_reconstruct, expand_continuous, expand_endo, km_expand, reconstruct)

logging.basicConfig(level=logging.INFO)
logger = logging.getLogger(__name__)

N = 10
MARGIN = 10
W = N + MARGIN


def epsilon(w):
    """f -> f(1) on coefficients in x^n: row 0 is all ones."""
    return OpMatrix([[1] * (w + 1)] + [[0] * (w + 1) for _ in range(w)], row_band=-1, col_band=w)


def epsilon_polys(n):
    """(1 - x)^k / k! for k <= n."""
    return PolySeq([[Fraction((-1) ** i * comb(k, i), factorial(k)) for i in range(k + 1)] for k in range(n + 1)])


def random_alpha(rng, length):
    return CoeffSeq(random_coefficients(rng, length), ALPHA)


def random_beta(rng, length):
    return CoeffSeq([1] + random_coefficients(rng, length - 1), BETA)


def rows_in_basis(matrix, e, rows):
    """Rows 0..rows of the matrix written in the coordinates of basis e."""
    in_basis = e.inverse_matrix() @ matrix @ e.as_matrix()
    return [list(in_basis.entries[r]) for r in range(rows + 1)]


class TestEpsilon:
    def test_polynomials(self):
        w = 8 + MARGIN
        polys = expand_endo(epsilon(w), BasisMat.standard(w), CoeffSeq.ones(w + 1, ALPHA),
                            BasisMat.factorial(w), CoeffSeq.ones(w + 1, BETA), 8)
        assert polys == epsilon_polys(8), f"got {polys.polys}"
        logger.info("✅ epsilon expands with P_n = (1 - x)^n / n!")

    def test_reconstruction(self):
        w = 8 + MARGIN
        args = (BasisMat.standard(w), CoeffSeq.ones(w + 1, ALPHA), BasisMat.factorial(w), CoeffSeq.ones(w + 1, BETA))
        polys = expand_endo(epsilon(w), *args, 8)
        rebuilt = reconstruct(polys, *args)
        assert rebuilt.col_band == 8
        assert rebuilt.equal_on_band(epsilon(w))

    def test_matches_derivative_lowering(self):
        """L on x^n with beta = (1, 1, 2, ...) is d/dx, the same operator as unit steps on x^n/n!."""
        w = 6 + MARGIN
        polys = expand_endo(epsilon(w), BasisMat.standard(w), CoeffSeq.ones(w + 1, ALPHA),
                            BasisMat.standard(w), CoeffSeq.derivative(w + 1), 6)
        assert polys == epsilon_polys(6)

    def test_km_expansion(self):
        assert km_expand(epsilon(W), N) == epsilon_polys(N)

    def test_latex_lines(self):
        lines = epsilon_polys(2).to_latex()
        assert lines[0] == "P_{0}(x) = 1"
        assert lines[2].startswith("P_{2}(x) = ")
        assert "x - 1" in lines[2]

    def test_sympy_expression(self):
        x = sympy.Symbol("x")
        assert sympy.expand(epsilon_polys(3).as_sympy(3) - (1 - x) ** 3 / 6) == 0


class TestRoundTrip:
    def test_random_bases(self, rng):
        for trial in range(20):
            a, b = random_upper_basis(rng, W), random_upper_basis(rng, W)
            alpha, beta = random_alpha(rng, W + 1), random_beta(rng, W + 1)
            phi = random_matrix(rng, W)
            polys = expand_endo(phi, a, alpha, b, beta, N)
            assert len(polys) == N + 1
            rebuilt = reconstruct(polys, a, alpha, b, beta)
            assert rebuilt.col_band == N, f"trial {trial}: reconstruction bands {rebuilt!r}"
            assert rebuilt.equal_on_band(phi), f"trial {trial}: reconstruction differs"
        logger.info("✅ 20 random expansions reconstruct their matrices")

    def test_km_agrees_with_ladder_form(self, rng):
        for _ in range(5):
            phi = random_matrix(rng, W)
            ladder_form = expand_endo(phi, BasisMat.standard(W), CoeffSeq.ones(W + 1, ALPHA),
                                      BasisMat.factorial(W), CoeffSeq.ones(W + 1, BETA), N)
            assert km_expand(phi, N) == ladder_form

    def test_origin_ratio(self):
        """b_0 = 2 a_0 halves every polynomial."""
        w = 8
        ones_a, ones_b = CoeffSeq.ones(w + 1, ALPHA), CoeffSeq.ones(w + 1, BETA)
        plain = expand_endo(epsilon(w), BasisMat.standard(w), ones_a, BasisMat.factorial(w), ones_b, 4)
        doubled_b = BasisMat.scaled(BasisMat.factorial(w), [2] * (w + 1))
        doubled = expand_endo(epsilon(w), BasisMat.standard(w), ones_a, doubled_b, ones_b, 4)
        assert doubled == plain

    def test_basis_mismatch(self):
        w = 4
        columns = [[1 if r == c else 0 for r in range(w + 1)] for c in range(w + 1)]
        columns[0][1] = 1
        with pytest.raises(BasisMismatchError):
            expand_endo(OpMatrix.identity(w), BasisMat.standard(w), CoeffSeq.ones(w + 1, ALPHA),
                        BasisMat.from_columns(columns), CoeffSeq.ones(w + 1, BETA), 2)

    def test_index_beyond_window(self):
        with pytest.raises(OrderMismatchError):
            expand_endo(OpMatrix.identity(3), BasisMat.standard(3), CoeffSeq.ones(4, ALPHA),
                        BasisMat.standard(3), CoeffSeq.ones(4, BETA), 4)

    def test_identity_expansion(self):
        """With a = b and unit steps the identity is P_0 = 1 alone."""
        w = 8
        e = BasisMat.factorial(w)
        polys = expand_endo(OpMatrix.identity(w), e, CoeffSeq.ones(w + 1, ALPHA), e, CoeffSeq.ones(w + 1, BETA), 5)
        assert polys[0] == [1]
        assert all(polys[k] == [] for k in range(1, 6))


class TestContinuous:
    def test_epsilon_transpose(self):
        w = 8 + MARGIN
        psi = epsilon(w).transpose()
        assert psi.row_band == w
        polys = expand_continuous(psi, BasisMat.standard(w), CoeffSeq.ones(w + 1, ALPHA),
                                  CoeffSeq.derivative(w + 1), 8)
        assert polys == epsilon_polys(8)

    def test_random_round_trips(self, rng):
        for trial in range(10):
            e = random_upper_basis(rng, W)
            alpha, beta = random_alpha(rng, W + 1), random_beta(rng, W + 1)
            psi = random_matrix(rng, W)
            polys = expand_continuous(psi, e, alpha, beta, N)
            raise_hat, lower_hat = continuous_operators(alpha, beta)
            rebuilt = continuous_reconstruct(polys, e, raise_hat, lower_hat)
            assert rows_in_basis(rebuilt, e, N) == rows_in_basis(psi, e, N), f"trial {trial}: rows differ"
            report = continuous_check(psi, polys, e, raise_hat, lower_hat)
            assert report.checked == (N + 1) * (W + 1), f"trial {trial}: only {report.checked} entries compared"
            assert report.passed, report.summary()
        logger.info("✅ 10 continuous expansions reproduce their rows")

    def test_corollary_mode(self, rng):
        n, w = 5, 12
        e = BasisMat.factorial(w)
        raise_hat, lower_hat = random_alpha(rng, w + 1), random_beta(rng, w + 1)
        psi = random_matrix(rng, w)
        polys = expand_continuous(psi, e, raise_hat, lower_hat, n, corollary=True)
        rebuilt = continuous_reconstruct(polys, e, raise_hat, lower_hat)
        assert rebuilt.row_band == n
        assert [rebuilt.entries[r] for r in range(n + 1)] == [psi.entries[r] for r in range(n + 1)]

    def test_check_reports_wrong_polynomials(self, rng):
        n, w = 4, 8
        e = random_upper_basis(rng, w)
        alpha, beta = random_alpha(rng, w + 1), random_beta(rng, w + 1)
        psi = random_matrix(rng, w)
        raise_hat, lower_hat = continuous_operators(alpha, beta)
        polys = expand_continuous(psi, e, alpha, beta, n)
        last = list(polys[n]) or [Fraction(0)]
        last[0] += 1
        bumped = PolySeq([list(p) for p in polys][:-1] + [last])
        report = continuous_check(psi, bumped, e, raise_hat, lower_hat)
        assert not report.passed
        assert all(m.where[0] == n for m in report.mismatches), f"unexpected rows in {report.mismatches}"

    def test_failed_reconstruction_raises(self, rng, monkeypatch):
        w = 8
        psi = random_matrix(rng, w)
        monkeypatch.setattr(ladder, "expand_endo", lambda *args: PolySeq([[1]]))
        with pytest.raises(ExpansionError, match="does not reproduce"):
            expand_continuous(psi, random_upper_basis(rng, w), random_alpha(rng, w + 1), random_beta(rng, w + 1), 3)

    def test_requires_row_finite(self):
        with pytest.raises(FieldError, match="row-finite"):
            expand_continuous(epsilon(6), BasisMat.standard(6), CoeffSeq.ones(7, ALPHA), CoeffSeq.ones(7, BETA), 3)

    def test_operator_coefficients(self):
        alpha = CoeffSeq([2, 3, 4], ALPHA)
        beta = CoeffSeq([1, 5, 6], BETA)
        assert continuous_operators(alpha, beta) == (CoeffSeq([5, 6], ALPHA), CoeffSeq([1, 2, 3, 4], BETA))
        assert continuous_operators(alpha, beta, corollary=True) == (alpha, beta)


def test_polyseq_json():
    polys = epsilon_polys(4)
    assert PolySeq.from_json(polys.to_json()) == polys
    assert polys.degree(3) == 3

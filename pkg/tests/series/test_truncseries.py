import logging
from fractions import Fraction
from math import comb, factorial

import pytest

from weylab.errors import OrderMismatchError, SeriesDomainError
from weylab.series import TruncSeries, binom_pow, compose, exp_trunc, log_trunc

logging.basicConfig(level=logging.INFO)
logger = logging.getLogger(__name__)

N = 10


def x(order=N):
    return TruncSeries.monomial(1, order)


class TestConstruction:
    def test_padding_and_cutting(self):
        assert TruncSeries([1, 2], order=4).coeffs == [1, 2, 0, 0, 0]
        assert TruncSeries([1, 2, 3, 4], order=1).coeffs == [1, 2]

    def test_order_inferred_from_coefficients(self):
        assert TruncSeries([1, "1/2", 3]).order == 2

    def test_empty_needs_order(self):
        with pytest.raises(ValueError):
            TruncSeries([])

    def test_monomial_past_order_is_zero(self):
        assert TruncSeries.monomial(5, 3).is_zero()

    def test_str_shows_remainder(self):
        assert str(TruncSeries([1, 0, 2])) == "1 + 2 x^2 + O(x^3)"

    def test_valuation(self):
        assert TruncSeries([0, 0, 3], order=5).valuation() == 2
        assert TruncSeries.zero(5).valuation() is None


class TestRing:
    def test_geometric_inverse(self):
        one_minus_x = 1 - x()
        assert one_minus_x * TruncSeries.geometric(N) == TruncSeries.constant(1, N)
        assert one_minus_x.inverse() == TruncSeries.geometric(N)
        assert one_minus_x ** -1 == TruncSeries.geometric(N)
        logger.info("✅ (1 - x)^-1 is the geometric series")

    def test_integer_power(self):
        cube = (1 + x()) ** 3
        assert cube.coeffs[:5] == [1, 3, 3, 1, 0]

    def test_division_by_scalar(self):
        assert (TruncSeries([2, 4], order=1) / 2).coeffs == [1, 2]

    def test_inverse_requires_constant_term(self):
        with pytest.raises(SeriesDomainError):
            x().inverse()

    def test_mixed_orders_rejected(self):
        with pytest.raises(OrderMismatchError):
            TruncSeries.constant(1, 3) + TruncSeries.constant(1, 4)

    def test_mixed_variables_rejected(self):
        with pytest.raises(OrderMismatchError):
            TruncSeries.constant(1, 3, var="x") * TruncSeries.constant(1, 3, var="t")

    def test_evaluation_at_rational(self):
        p = TruncSeries([1, 1, 1])
        assert p(2) == 7
        assert p(Fraction(1, 2)) == Fraction(7, 4)


class TestComposition:
    def test_geometric_of_double(self):
        """1/(1 - 2x) has coefficients 2^n."""
        result = compose(TruncSeries.geometric(N), x().scale(2))
        assert result.coeffs == [2 ** n for n in range(N + 1)], f"got {result}"

    def test_inner_constant_term_rejected(self):
        with pytest.raises(SeriesDomainError):
            TruncSeries.geometric(N).compose(1 + x())

    def test_call_with_series_composes(self):
        f = TruncSeries.exponential(N)
        assert f(x()) == f

    @pytest.mark.parametrize("f", [
        TruncSeries([0, 1, 1], order=N),
        TruncSeries([0, 2, 0, -1], order=N),
        TruncSeries([0, 1] + [Fraction(1, n) for n in range(2, N + 1)]),
    ])
    def test_reversion(self, f):
        r = f.reversion()
        assert f.compose(r) == x(), f"f(r(x)) != x for f = {f}"
        assert r.compose(f) == x(), f"r(f(x)) != x for f = {f}"

    def test_reversion_of_log_is_exp_minus_one(self):
        log1p = (1 + x()).log()
        assert log1p.reversion() == TruncSeries.exponential(N) - 1
        logger.info("✅ reversion(log(1 + x)) = e^x - 1")

    def test_reversion_needs_linear_term(self):
        with pytest.raises(SeriesDomainError):
            TruncSeries([0, 0, 1], order=N).reversion()


class TestBinomialPower:
    def test_central_binomials(self):
        """(1 - 4x)^(-1/2) = sum C(2n, n) x^n."""
        result = binom_pow(1 - x().scale(4), Fraction(-1, 2))
        assert result.coeffs == [comb(2 * n, n) for n in range(N + 1)], f"got {result}"

    @pytest.mark.parametrize("r", [Fraction(1, 2), Fraction(-3, 4), Fraction(2, 3)])
    def test_powers_multiply(self, r):
        base = TruncSeries([1, 3, -1, 2], order=N)
        product = base.binom_pow(r) * base.binom_pow(1 - r)
        assert product == base, f"base^r * base^(1-r) != base for r = {r}"

    def test_integer_exponent_agrees_with_pow(self):
        base = TruncSeries([1, 1, 2], order=N)
        assert base.binom_pow(3) == base ** 3

    def test_constant_term_must_be_one(self):
        with pytest.raises(SeriesDomainError, match="constant term 1"):
            TruncSeries([2, 1], order=N).binom_pow(Fraction(1, 2))


class TestExpLog:
    def test_exp_of_x(self):
        assert exp_trunc(x()) == TruncSeries.exponential(N)
        assert TruncSeries.exponential(N).coeffs[4] == Fraction(1, factorial(4))

    def test_log_of_exp(self):
        assert log_trunc(TruncSeries.exponential(N)) == x()

    def test_exp_of_log(self, rng):
        coeffs = [1] + [Fraction(rng.randint(-5, 5), rng.randint(1, 4)) for _ in range(N)]
        f = TruncSeries(coeffs)
        assert f.log().exp() == f, f"exp(log(f)) != f for f = {f}"

    def test_exp_requires_zero_constant(self):
        with pytest.raises(SeriesDomainError):
            TruncSeries.constant(1, N).exp()

    def test_log_requires_unit_constant(self):
        with pytest.raises(SeriesDomainError):
            x().log()


class TestCalculus:
    def test_derive_drops_order(self):
        d = TruncSeries([1, 2, 3]).derive()
        assert d == TruncSeries([2, 6])

    def test_integrate_raises_order(self):
        i = TruncSeries([2, 6]).integrate()
        assert i == TruncSeries([0, 2, 3])

    def test_derive_order_zero(self):
        assert TruncSeries.constant(5, 0).derive() == TruncSeries.zero(0)

    def test_exponential_is_own_derivative(self):
        e = TruncSeries.exponential(N)
        assert e.derive() == e.truncate(N - 1)

    def test_truncate_cannot_raise(self):
        with pytest.raises(OrderMismatchError):
            x(3).truncate(4)


def test_json_restores_series():
    f = TruncSeries([1, Fraction(-2, 3), 0, 5], var="t")
    assert TruncSeries.from_json(f.to_json()) == f

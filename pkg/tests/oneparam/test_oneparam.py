import logging
from fractions import Fraction
from math import comb

import pytest

from weylab.endomatrix import LAMBDA
from weylab.errors import FieldError, OrderMismatchError
from weylab.hw_core import NormalForm
from weylab.oneparam import (X, PrefSub, apply_prefsub, compose_prefsub, group_law_check, integrate_monomial,
                             lie_series, prop2_bridge, tangent_check)
from weylab.opparser import parse_operator
from weylab.series import MultiSeries, TruncSeries

logging.basicConfig(level=logging.INFO)
logger = logging.getLogger(__name__)

LAMBDA_ORDER = 6
X_ORDER = 12


def field(coeff, power, order=X_ORDER):
    return TruncSeries.monomial(power, order, coeff=coeff, var=X)


@pytest.fixture(scope="module")
def central_binomial_group():
    """Group of 2 x^3 d/dx + 3 x^2."""
    return integrate_monomial(2, 3, 3, LAMBDA_ORDER, X_ORDER)


class TestIntegrateMonomial:
    def test_substitution_coefficients(self, central_binomial_group):
        """s = x (1 - 4 lambda x^2)^(-1/2) carries C(2n, n) at lambda^n x^(2n+1)."""
        s = central_binomial_group.s
        for n in range(6):
            assert s.coefficient(n, 2 * n + 1) == comb(2 * n, n), f"lambda^{n} coefficient of s"
        assert len(s.terms) == 6

    def test_prefunction_coefficients(self, central_binomial_group):
        """g = (1 - 4 lambda x^2)^(-3/4)."""
        g = central_binomial_group.g
        expected = TruncSeries([1, -4], order=LAMBDA_ORDER, var="t").binom_pow(Fraction(-3, 4))
        for n in range(LAMBDA_ORDER + 1):
            assert g.coefficient(n, 2 * n) == (expected[n] if 2 * n <= X_ORDER else 0)
        assert g.coefficient(1, 2) == 3
        assert g.coefficient(2, 4) == Fraction(21, 2)

    def test_group_law(self, central_binomial_group):
        report = group_law_check(central_binomial_group)
        assert report.passed, report.summary()
        logger.info("✅ closed-form group satisfies U(lambda) U(theta) = U(lambda + theta)")

    def test_tangent(self, central_binomial_group):
        report = tangent_check(central_binomial_group, field(2, 3), field(3, 2))
        assert report.checked == (X_ORDER + 1) ** 2
        assert report.passed, report.summary()

    def test_tangent_detects_wrong_multiplier(self, central_binomial_group):
        report = tangent_check(central_binomial_group, field(2, 3), field(2, 2))
        assert not report.passed

    @pytest.mark.parametrize("alpha,m,beta", [(1, 2, 0), (Fraction(1, 2), 2, 1), (-1, 4, 2), (3, 3, Fraction(-1, 3))])
    def test_other_fields(self, alpha, m, beta):
        u = integrate_monomial(alpha, m, beta, 4, 9)
        assert group_law_check(u).passed
        assert tangent_check(u, field(alpha, m, 9), field(beta, m - 1, 9)).passed

    @pytest.mark.parametrize("alpha,m", [(1, 1), (1, 0), (0, 3)])
    def test_rejected_fields(self, alpha, m):
        with pytest.raises(FieldError):
            integrate_monomial(alpha, m, 1, 3, 6)


class TestLieSeries:
    def test_agrees_with_closed_form(self, central_binomial_group):
        u = lie_series(field(2, 3), field(3, 2), LAMBDA_ORDER)
        assert u == central_binomial_group, "formal exponential differs from the closed form"

    def test_general_field(self):
        """x^2 d/dx + x: no closed form is used, but the group law still holds."""
        q = TruncSeries([0, 0, 1, 1], order=8, var=X)
        v = TruncSeries([0, 1], order=8, var=X)
        u = lie_series(q, v, 4)
        assert group_law_check(u).passed
        assert tangent_check(u, q, v).passed

    def test_requires_vanishing_q(self):
        with pytest.raises(FieldError):
            lie_series(TruncSeries([1, 1], order=4), TruncSeries.zero(4), 3)

    def test_orders_must_agree(self):
        with pytest.raises(OrderMismatchError):
            lie_series(field(1, 2, 5), field(1, 1, 6), 3)


class TestPrefSub:
    def test_identity_acts_trivially(self):
        u = PrefSub.identity(3, 5)
        f = TruncSeries([1, 2, 0, -1, 0, 4], var=X)
        assert apply_prefsub(u, f) == MultiSeries.from_trunc(f, (LAMBDA, X), (3, 5))
        assert u.leading_terms() == {"g": "1 + ...", "s": "1 x + ..."}

    def test_prefunction_on_constant(self, central_binomial_group):
        image = apply_prefsub(central_binomial_group, TruncSeries.constant(1, X_ORDER, var=X))
        assert image == central_binomial_group.g

    def test_composition_with_identity(self, central_binomial_group):
        identity = PrefSub.identity(LAMBDA_ORDER, X_ORDER)
        assert compose_prefsub(identity, central_binomial_group, same_parameter=True) == central_binomial_group

    def test_perturbed_prefunction_breaks_group_law(self, central_binomial_group):
        u = central_binomial_group
        bump = MultiSeries.make((LAMBDA, X), u.g.orders, {(2, 4): 1})
        perturbed = PrefSub(u.g + bump, u.s)
        report = group_law_check(perturbed)
        assert not report.passed
        logger.info(f"perturbed g: {report.summary()}")

    def test_prefunction_must_start_at_one(self):
        variables, orders = (LAMBDA, X), (2, 4)
        with pytest.raises(FieldError):
            PrefSub(MultiSeries.constant(2, variables, orders), MultiSeries.variable(X, variables, orders))

    def test_substitution_must_start_at_x(self):
        variables, orders = (LAMBDA, X), (2, 4)
        with pytest.raises(FieldError):
            PrefSub(MultiSeries.constant(1, variables, orders), MultiSeries.variable(X, variables, orders).scale(2))

    def test_order_mismatch(self):
        with pytest.raises(OrderMismatchError):
            apply_prefsub(PrefSub.identity(2, 4), TruncSeries.constant(1, 5, var=X))

    def test_json_restores_substitution(self, central_binomial_group):
        assert PrefSub.from_json(central_binomial_group.to_json()) == central_binomial_group


class TestStirlingBridge:
    @pytest.mark.parametrize("source", ["a+ a", "a+ a a+", "(a+)^2 a a+ + a+ a (a+)^2", "a+", "2 (a+)^2 a"])
    def test_table_substitution_matches_exponential(self, source):
        report = prop2_bridge(parse_operator(source), 4, 10)
        assert report.checked > 0
        assert report.passed, report.summary()

    def test_two_annihilators_rejected(self, two_annihilator_operator):
        with pytest.raises(FieldError, match="two or more annihilators"):
            prop2_bridge(two_annihilator_operator, 3, 6)

    def test_negative_excess_rejected(self):
        with pytest.raises(FieldError, match="negative excess"):
            prop2_bridge(NormalForm.annihilator(), 3, 6)

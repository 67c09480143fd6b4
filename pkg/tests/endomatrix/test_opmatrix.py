import logging
from fractions import Fraction
from math import comb, factorial

import pytest

from fixtures.operators import random_normal_form
from weylab.endomatrix import (LAMBDA, DenomSeq, OpMatrix, Triangularity, apply, apply_series, compose,
                               exp_group_law_check, exp_lambda, rho_bf, triangularity)
from weylab.errors import NotHomogeneousError, OrderMismatchError
from weylab.hw_core import NormalForm, normal_product, normalize_word
from weylab.opparser import parse_operator
from weylab.series import TruncSeries

logging.basicConfig(level=logging.INFO)
logger = logging.getLogger(__name__)

A = NormalForm.annihilator()
AD = NormalForm.creator()


class TestRepresentation:
    def test_derivative_on_factorial_basis(self):
        """a sends x^k/k! to x^(k-1)/(k-1)!."""
        n = 6
        rho = rho_bf(A, n, DenomSeq.factorial(n))
        for r in range(n + 1):
            for k in range(n + 1):
                assert rho[r, k] == (1 if r == k - 1 else 0), f"entry ({r}, {k})"

    def test_bands_of_ladder_letters(self):
        n = 5
        lower, upper = rho_bf(A, n), rho_bf(AD, n)
        assert (lower.row_band, lower.col_band) == (n - 1, n)
        assert (upper.row_band, upper.col_band) == (n, n - 1)

    def test_canonical_commutation(self):
        n = 8
        commutator = rho_bf(A, n).commutator(rho_bf(AD, n))
        assert commutator.equal_on_band(OpMatrix.identity(n)), "[a, a+] is not the identity on the band"
        logger.info("✅ [a, a+] = 1 on the exact band")

    def test_homomorphism_on_random_pairs(self, rng):
        n = 20
        for trial in range(50):
            f = random_normal_form(rng, max_index=4)
            g = random_normal_form(rng, max_index=4)
            product = rho_bf(f, n) @ rho_bf(g, n)
            direct = rho_bf(normal_product(f, g), n)
            assert product.equal_on_band(direct), f"trial {trial}: rho({f} * {g}) differs"
        logger.info("✅ rho is multiplicative on 50 random pairs")

    def test_words_match_letter_products(self, rng):
        n = 16
        letters = {"a": rho_bf(A, n), "a+": rho_bf(AD, n)}
        for _ in range(20):
            word = [rng.choice(["a", "a+"]) for _ in range(rng.randint(1, 6))]
            product = OpMatrix.identity(n)
            for letter in word:
                product = product @ letters[letter]
            assert product.equal_on_band(rho_bf(normalize_word(word), n)), f"word {' '.join(word)}"

    def test_dimension_mismatch(self):
        with pytest.raises(OrderMismatchError):
            compose(rho_bf(A, 3), rho_bf(A, 4))

    def test_denominator_mismatch(self):
        with pytest.raises(OrderMismatchError):
            rho_bf(A, 3) + rho_bf(A, 3, DenomSeq.factorial(3))

    def test_not_square(self):
        with pytest.raises(ValueError):
            OpMatrix([[1, 2], [3]])


class TestTriangularity:
    @pytest.mark.parametrize("source,expected", [
        ("a", Triangularity.STRICTLY_UPPER),
        ("a+ a", Triangularity.DIAGONAL),
        ("a+ a a+", Triangularity.STRICTLY_LOWER),
        ("(a+)^2 a a+ + a+ a (a+)^2", Triangularity.STRICTLY_LOWER),
    ])
    def test_shape_follows_excess(self, source, expected):
        assert triangularity(parse_operator(source), 8) == expected

    def test_not_homogeneous(self):
        with pytest.raises(NotHomogeneousError):
            triangularity(parse_operator("a + a+"), 4)


class TestApply:
    def test_derivative(self):
        f = TruncSeries([0, 0, 1, 0])
        assert apply(rho_bf(A, 3), f) == TruncSeries([0, 2, 0, 0])

    def test_number_operator_on_factorial_basis(self):
        """x d/dx multiplies the coefficient of x^k by k in any basis."""
        f = TruncSeries([1, 1, 1, 1])
        result = apply(rho_bf(parse_operator("a+ a"), 3, DenomSeq.factorial(3)), f)
        assert result == TruncSeries([0, 1, 2, 3])

    def test_order_must_match(self):
        with pytest.raises(OrderMismatchError):
            apply(rho_bf(A, 3), TruncSeries.constant(1, 4))

    def test_lambda_matrix_rejected(self):
        with pytest.raises(TypeError):
            apply(exp_lambda(A, 3, 2), TruncSeries.constant(1, 3))


class TestExponential:
    def test_translation(self):
        """exp(lambda d/dx) x^2 = (x + lambda)^2."""
        image = apply_series(exp_lambda(A, 4, 4), TruncSeries([0, 0, 1], order=4))
        assert image.variables == (LAMBDA, "x")
        assert image.terms == {(0, 2): 1, (1, 1): 2, (2, 0): 1}, f"got {image.terms}"

    def test_translation_entries(self):
        n = 5
        matrix = exp_lambda(A, n, n)
        for r in range(n + 1):
            for k in range(r, n + 1):
                assert matrix[r, k][k - r] == comb(k, r), f"entry ({r}, {k})"

    def test_dilation(self):
        """exp(lambda x d/dx) has e^(k lambda) on the diagonal."""
        matrix = exp_lambda(parse_operator("a+ a"), 3, 5)
        expected = TruncSeries([Fraction(2 ** m, factorial(m)) for m in range(6)], var=LAMBDA)
        assert matrix[2, 2] == expected
        assert matrix.lambda_order == 5

    def test_at_lambda(self):
        matrix = exp_lambda(A, 3, 3).at_lambda(1)
        assert matrix.is_rational()
        assert matrix[0, 3] == 1 and matrix[1, 3] == 3

    @pytest.mark.parametrize("source", ["a", "a+ a", "a+ a a+", "(a+)^2 a"])
    def test_group_law(self, source):
        report = exp_group_law_check(parse_operator(source), 4, 3)
        assert report.checked > 0
        assert report.passed, report.summary()

    def test_not_homogeneous(self):
        with pytest.raises(NotHomogeneousError):
            exp_lambda(parse_operator("a + 1"), 3, 2)


class TestCorrespondence:
    def test_denominators_conjugate_by_diagonal(self, rng):
        n = 10
        ones, facts = DenomSeq.ones(n), DenomSeq.factorial(n)
        for trial in range(20):
            f = random_normal_form(rng, max_index=4)
            plain, scaled = rho_bf(f, n, ones), rho_bf(f, n, facts)
            assert (plain.row_band, plain.col_band) == (scaled.row_band, scaled.col_band)
            for r in range(n + 1):
                for k in range(n + 1):
                    assert scaled[r, k] == plain[r, k] * facts[r] / facts[k], f"trial {trial}: entry ({r}, {k})"

    def test_apply_ignores_denominators(self, rng):
        n = 8
        f = random_normal_form(rng, max_index=3)
        series = TruncSeries([Fraction(rng.randint(-5, 5), rng.randint(1, 4)) for _ in range(n + 1)])
        custom = DenomSeq.custom([k + 2 for k in range(n + 1)])
        expected = apply(rho_bf(f, n), series)
        assert apply(rho_bf(f, n, DenomSeq.factorial(n)), series) == expected
        assert apply(rho_bf(f, n, custom), series) == expected

    def test_linear_in_the_operator(self, rng):
        n = 12
        for trial in range(20):
            f = random_normal_form(rng, max_index=4)
            g = random_normal_form(rng, max_index=4)
            assert rho_bf(f + g, n).equal_on_band(rho_bf(f, n) + rho_bf(g, n)), f"trial {trial}: sum"
            assert rho_bf(f.scale(Fraction(-3, 2)), n) == rho_bf(f, n).scale(Fraction(-3, 2)), f"trial {trial}: scale"

    def test_apply_is_linear(self, rng):
        n = 8
        matrix = rho_bf(random_normal_form(rng, max_index=3), n)
        f = TruncSeries([rng.randint(-4, 4) for _ in range(n + 1)])
        g = TruncSeries([Fraction(rng.randint(-4, 4), 3) for _ in range(n + 1)])
        assert apply(matrix, f + g) == apply(matrix, f) + apply(matrix, g)
        assert apply(matrix, f.scale(5)) == apply(matrix, f).scale(5)

    def test_one_to_one(self, rng):
        """Words up to (a+)^4 a^4 leave their lowest column exact from n = 4 on."""
        n = 12
        assert not list(rho_bf(NormalForm.zero(), n).nonzero())
        for trial in range(30):
            f = random_normal_form(rng, max_index=4)
            g = random_normal_form(rng, max_index=4)
            if not f or f == g:
                continue
            assert not rho_bf(f, n).equal_on_band(rho_bf(g, n)), f"trial {trial}: {f} and {g} share a matrix"
            assert list(rho_bf(f, n).nonzero()), f"trial {trial}: nonzero {f} maps to zero"
        logger.info("✅ rho separates 30 random pairs")


class TestSerialization:
    def test_lambda_matrix_json(self):
        matrix = exp_lambda(parse_operator("a+ a a+"), 3, 2, DenomSeq.factorial(3))
        assert OpMatrix.from_json(matrix.to_json()) == matrix

    def test_transpose_swaps_bands(self):
        rho = rho_bf(AD, 4)
        transposed = rho.transpose()
        assert (transposed.row_band, transposed.col_band) == (rho.col_band, rho.row_band)
        assert transposed[0, 1] == rho[1, 0]

    def test_rows_as_text(self):
        rho = rho_bf(parse_operator("1/2 a+ a"), 2)
        assert rho.rows_as_text()[1] == ["0", "1/2", "0"]

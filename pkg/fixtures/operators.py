"""
Shared operators and random generators for the test suite.
"""

import random
from fractions import Fraction
from typing import List

import pytest

from weylab.endomatrix import OpMatrix
from weylab.hw_core import NormalForm
from weylab.ladder import BasisMat
from weylab.opparser import parse_operator

# Stirling numbers of the second kind, rows 0..6
STIRLING_NUMBER_OPERATOR = "a+ a"
STIRLING_NUMBER_ROWS = [
    [1],
    [0, 1],
    [0, 1, 1],
    [0, 1, 3, 1],
    [0, 1, 7, 6, 1],
    [0, 1, 15, 25, 10, 1],
    [0, 1, 31, 90, 65, 15, 1],
]

# excess 1, one annihilator per word
CREATOR_SANDWICH_OPERATOR = "a+ a a+"
CREATOR_SANDWICH_ROWS = [
    [1],
    [1, 1],
    [2, 4, 1],
    [6, 18, 9, 1],
    [24, 96, 72, 16, 1],
    [120, 600, 600, 200, 25, 1],
    [720, 4320, 5400, 2400, 450, 36, 1],
]

# excess 1, two annihilators in one word
TWO_ANNIHILATOR_OPERATOR = "a+ a a a+ a+"
TWO_ANNIHILATOR_ROWS = [
    [1],
    [2, 4, 1],
    [12, 60, 54, 14, 1],
    [144, 1296, 2232, 1296, 306, 30, 1],
    [2880, 40320, 109440, 105120, 45000, 9504, 1016, 52, 1],
]

# excess 2, phi has the central binomial coefficients
CENTRAL_BINOMIAL_OPERATOR = "(a+)^2 a a+ + a+ a (a+)^2"


@pytest.fixture(scope="session")
def number_operator() -> NormalForm:
    return parse_operator(STIRLING_NUMBER_OPERATOR)


@pytest.fixture(scope="session")
def creator_sandwich() -> NormalForm:
    return parse_operator(CREATOR_SANDWICH_OPERATOR)


@pytest.fixture(scope="session")
def two_annihilator_operator() -> NormalForm:
    return parse_operator(TWO_ANNIHILATOR_OPERATOR)


@pytest.fixture(scope="session")
def central_binomial_operator() -> NormalForm:
    return parse_operator(CENTRAL_BINOMIAL_OPERATOR)


@pytest.fixture(scope="session")
def epsilon_fixture(data_dir):
    return data_dir / "epsilon.json"


@pytest.fixture(scope="session")
def identity_fixture(data_dir):
    return data_dir / "identity.json"


def random_rational(rng: random.Random, bound: int = 5, nonzero: bool = False) -> Fraction:
    while True:
        value = Fraction(rng.randint(-bound, bound), rng.randint(1, 3))
        if value or not nonzero:
            return value


def random_normal_form(rng: random.Random, max_index: int = 4, terms: int = 3) -> NormalForm:
    """Sum of a few random words (a+)^i a^j with i, j <= max_index."""
    result = NormalForm.zero()
    for _ in range(terms):
        result = result + NormalForm.word(rng.randint(0, max_index), rng.randint(0, max_index),
                                          random_rational(rng, nonzero=True))
    return result


def random_matrix(rng: random.Random, w: int, density: float = 0.5) -> OpMatrix:
    rows = [[random_rational(rng) if rng.random() < density else 0 for _ in range(w + 1)] for _ in range(w + 1)]
    return OpMatrix(rows)


def random_upper_basis(rng: random.Random, w: int) -> BasisMat:
    """Upper triangular with nonzero diagonal: vector n has degree n."""
    columns: List[List[Fraction]] = []
    for n in range(w + 1):
        column = [random_rational(rng, bound=3) if r < n else Fraction(0) for r in range(w + 1)]
        column[n] = random_rational(rng, bound=3, nonzero=True)
        columns.append(column)
    return BasisMat.from_columns(columns)


def random_coefficients(rng: random.Random, length: int) -> List[Fraction]:
    return [random_rational(rng, bound=4, nonzero=True) for _ in range(length)]


@pytest.fixture
def make_random_normal_form(rng):
    return lambda **kwargs: random_normal_form(rng, **kwargs)

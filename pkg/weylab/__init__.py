"""Exact computations in the Heisenberg-Weyl algebra and its ladder-operator expansions."""

from .hw_core import NormalForm, normal_product, normalize_word
from .opparser import parse_operator
from .series import TruncSeries

__version__ = "0.1.0"

__all__ = ["NormalForm", "TruncSeries", "normal_product", "normalize_word", "parse_operator"]

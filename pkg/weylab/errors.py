"""
Exception hierarchy for the weylab engine.

Every domain error derives from both WeylabError and ValueError so callers can
catch either. The CLI maps ``exit_code`` to the process status.
"""

from typing import FrozenSet, Iterable, Optional


class WeylabError(Exception):
    """Base class for all weylab errors."""

    exit_code = 1


class ParseError(WeylabError, ValueError):
    """
    Syntax error in an operator expression.

    Attributes:
        offset: Byte offset (UTF-8) of the offending token in the source
        expected: Token kinds that would have been accepted at that offset
    """

    exit_code = 2

    def __init__(self, message: str, offset: int, expected: Optional[Iterable[str]] = None):
        self.offset = offset
        self.expected: FrozenSet[str] = frozenset(expected or ())
        detail = f"{message} at byte {offset}"
        if self.expected:
            detail += f" (expected one of: {', '.join(sorted(self.expected))})"
        super().__init__(detail)


class ConfigError(WeylabError, ValueError):
    """Invalid or unreadable configuration."""

    exit_code = 2


class FixtureError(WeylabError, ValueError):
    """JSON input that does not match its schema."""

    exit_code = 2


class OrderMismatchError(WeylabError, ValueError):
    """Operands carry different truncation orders or dimensions."""


class SeriesDomainError(WeylabError, ValueError):
    """A constant-term precondition of a series operation is violated."""


class NotHomogeneousError(WeylabError, ValueError):
    """The operator is not homogeneous (or is zero) where an excess is required."""


class FieldError(WeylabError, ValueError):
    """A vector field or operator lies outside the family a construction handles."""


class ShapeError(WeylabError, RuntimeError):
    """A normal form did not have the shape predicted by its excess."""


class SingularBasisError(WeylabError, ValueError):
    """A basis matrix is not invertible."""


class BasisMismatchError(WeylabError, ValueError):
    """The first vectors of two bases are not proportional."""


class CoefficientError(WeylabError, ValueError):
    """A ladder coefficient sequence violates its invariants."""


class ExpansionError(WeylabError, ArithmeticError):
    """An expansion did not reproduce the operator it was computed from."""

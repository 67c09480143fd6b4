"""Result types for verification routines that report instead of raising."""

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Tuple

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Mismatch:
    """One failed coordinate: where it is, what was stored, what the identity predicts."""

    where: Tuple[Any, ...]
    actual: Any
    expected: Any

    def __str__(self) -> str:
        return f"at {self.where}: got {self.actual}, expected {self.expected}"


@dataclass
class CheckReport:
    """
    Outcome of an identity check.

    Attributes:
        name: Short label, e.g. "sheffer"
        checked: Number of coordinates compared
        mismatches: Every failing coordinate
        in_scope: False when the identity is not guaranteed for the input
    """

    name: str
    checked: int = 0
    mismatches: List[Mismatch] = field(default_factory=list)
    in_scope: bool = True

    @property
    def passed(self) -> bool:
        return not self.mismatches

    def record(self, where: Tuple[Any, ...], actual: Any, expected: Any) -> None:
        self.checked += 1
        if actual != expected:
            self.mismatches.append(Mismatch(where, actual, expected))

    def summary(self) -> str:
        scope = "" if self.in_scope else " (out of proposition scope)"
        if self.passed:
            return f"✅ {self.name} check passed: {self.checked} entries{scope}"
        return f"❌ {self.name} check failed: {len(self.mismatches)} of {self.checked} entries{scope}"

    def log(self) -> "CheckReport":
        if self.passed:
            logger.info(self.summary())
        else:
            logger.warning(self.summary())
            for mismatch in self.mismatches[:5]:
                logger.debug(f"  {mismatch}")
        return self

    def to_json(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "checked": self.checked,
            "passed": self.passed,
            "in_scope": self.in_scope,
            "mismatches": [
                {"where": list(m.where), "actual": str(m.actual), "expected": str(m.expected)}
                for m in self.mismatches
            ],
        }

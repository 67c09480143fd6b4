import json
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, Tuple

from utils.formats import polys_to_latex, to_csv
from utils.validator import EXPAND_FIXTURE_SCHEMA, validate_document

from ..endomatrix import OpMatrix
from ..errors import ConfigError, FixtureError, OrderMismatchError
from ..exact import rational_from_json, to_fraction
from ..ladder import (ALPHA, BETA, BasisMat, CoeffSeq, continuous_check, continuous_operators,
                      expand_continuous, expand_endo, reconstruct)
from ..reports import CheckReport
from .base_command import BaseCommand

ORDINARY = "ordinary"
CONTINUOUS = "continuous"


def _rational(value: Any) -> Fraction:
    return rational_from_json(value) if isinstance(value, dict) else to_fraction(value)


def _matrix(source: Dict[str, Any], w: int) -> OpMatrix:
    kind = source.get("kind")
    if kind == "identity":
        return OpMatrix.identity(w)
    if kind == "epsilon":
        # sum of coefficients: every x^k goes to 1, so row 0 never ends
        rows = [[1] * (w + 1)] + [[0] * (w + 1) for _ in range(w)]
        return OpMatrix(rows, row_band=-1, col_band=w)
    if kind == "epsilon_transpose":
        rows = [[1] + [0] * w for _ in range(w + 1)]
        return OpMatrix(rows, row_band=w, col_band=-1)
    rows = [[_rational(v) for v in row] for row in source["rows"]]
    return OpMatrix(rows, row_band=source.get("row_band"), col_band=source.get("col_band"))


def _basis(source: Dict[str, Any], w: int) -> BasisMat:
    kind = source.get("kind")
    if kind == "standard":
        return BasisMat.standard(w)
    if kind == "factorial":
        return BasisMat.factorial(w)
    return BasisMat.from_columns([[_rational(v) for v in col] for col in source["columns"]])


def _sequence(source: Any, role: str, length: int) -> CoeffSeq:
    if isinstance(source, list):
        return CoeffSeq([_rational(v) for v in source], role)
    if source["kind"] == "derivative":
        return CoeffSeq.derivative(length)
    return CoeffSeq.ones(length, role)


def load_expand_fixture(path: Path, n: int, margin: int) -> Tuple[str, OpMatrix, BasisMat, CoeffSeq, BasisMat, CoeffSeq]:
    """
    Read an expansion job: the matrix, both bases and both sequences.

    Named matrices and bases are built at working degree n + margin; an
    explicit matrix fixes the working degree itself.

    Raises:
        FixtureError: If the file is not valid JSON or does not match the schema
    """
    try:
        with open(path, "r", encoding="utf-8") as file:
            data = json.load(file)
    except FileNotFoundError:
        raise FixtureError(f"fixture {path} not found")
    except json.JSONDecodeError as e:
        raise FixtureError(f"Error parsing {path}: {e}")
    validate_document(data, EXPAND_FIXTURE_SCHEMA)
    w = len(data["phi"]["rows"]) - 1 if "rows" in data["phi"] else n + margin
    phi = _matrix(data["phi"], w)
    a = _basis(data["a"], w)
    b = _basis(data["b"], w)
    if a.dim != phi.dim or b.dim != phi.dim:
        raise FixtureError(f"bases of dimensions {a.dim}, {b.dim} against a matrix of dimension {phi.dim}")
    alpha = _sequence(data["alpha"], ALPHA, w + 1)
    beta = _sequence(data["beta"], BETA, w + 1)
    return data.get("mode", ORDINARY), phi, a, alpha, b, beta


class ExpandCommand(BaseCommand):
    """P_0..P_N of an endomorphism in relative ladder operators, read from a JSON fixture."""

    name = "expand"

    def render(self) -> str:
        if self.job.fixture is None:
            raise ConfigError("expand needs a fixture file")
        n = self.job.orders.trunc
        mode, phi, a, alpha, b, beta = load_expand_fixture(self.job.fixture, n, self.job.orders.margin)
        if n > phi.n:
            raise OrderMismatchError(f"cannot expand to index {n} in working degree {phi.n}")
        self.logger.info(f"Expanding a {phi.dim}-dimensional {mode} matrix to index {n}")
        if mode == CONTINUOUS:
            polys = expand_continuous(phi, a, alpha, beta, n)
            raise_hat, lower_hat = continuous_operators(alpha, beta)
            report = continuous_check(phi, polys, a, raise_hat, lower_hat)
        else:
            polys = expand_endo(phi, a, alpha, b, beta, n)
            rebuilt = reconstruct(polys, a, alpha, b, beta)
            report = CheckReport(name="reconstruction")
            for r in range(phi.dim):
                for k in range(phi.dim):
                    if phi.is_exact(r, k) and rebuilt.is_exact(r, k):
                        report.record((r, k), rebuilt[r, k], phi[r, k])
            report.log()
        self.report(report)
        if self.job.format == "csv":
            return to_csv([list(p) or [0] for p in polys])
        if self.job.format == "latex":
            return polys_to_latex(polys.to_latex())
        return self.json_text(self.document(n=n, polys=polys.to_json()["polys"], report=report.to_json()))

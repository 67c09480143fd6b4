from utils.formats import matrix_to_latex, series_to_latex, to_csv

from ..endomatrix import DenomSeq, exp_lambda
from .base_command import BaseCommand


class ExpCommand(BaseCommand):
    """exp(lambda omega) on the basis x^n/d_n, entries as lambda-series."""

    name = "exp"

    def render(self) -> str:
        omega = self.homogeneous_operator()
        n, lambda_order = self.job.orders.trunc, self.job.orders.lambda_order
        matrix = exp_lambda(omega, n, lambda_order, DenomSeq.named(self.job.denoms, n))
        self.logger.info(f"✅ exp matrix of dimension {matrix.dim}, bands ({matrix.row_band}, {matrix.col_band})")
        if self.job.format == "csv":
            # one row per nonzero lambda^p coefficient, so every cell is a plain rational
            rows = [[r, k, p, c]
                    for r, row in enumerate(matrix.entries)
                    for k, entry in enumerate(row)
                    for p, c in enumerate(entry.coeffs) if c]
            return to_csv(rows, header=["n", "k", "lambda_power", "coefficient"])
        if self.job.format == "latex":
            return matrix_to_latex([[series_to_latex(entry.coeffs, "lambda") for entry in row]
                                    for row in matrix.entries])
        return self.json_text(self.document(operator=self.job.op, lambda_order=lambda_order,
                                            matrix=matrix.to_json()))

from utils.formats import matrix_to_latex, to_csv

from ..stirling import at_most_one_annihilator, stirling_table
from .base_command import BaseCommand


class StirlingCommand(BaseCommand):
    """Generalized Stirling numbers S(n, k) for n <= --rows."""

    name = "stirling"

    def render(self) -> str:
        omega = self.homogeneous_operator()
        table = stirling_table(omega, self.job.orders.n_max)
        in_scope = at_most_one_annihilator(omega)
        if not in_scope:
            self.logger.info("Operator has words with several annihilators: out of proposition scope")
        self.logger.info(f"✅ Stirling table with {len(table.rows)} rows, excess {table.excess}")
        if self.job.format == "csv":
            return to_csv(table.rows)
        if self.job.format == "latex":
            return matrix_to_latex(table.rows)
        return self.json_text(self.document(operator=self.job.op, in_scope=in_scope, table=table.to_json()))

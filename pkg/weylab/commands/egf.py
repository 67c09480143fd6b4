from utils.formats import series_to_latex, to_csv

from ..errors import OrderMismatchError
from ..stirling import egf_extract, sheffer_check, stirling_table
from .base_command import BaseCommand


class EgfCommand(BaseCommand):
    """(g, phi) from the first two Stirling columns, with the Sheffer check."""

    name = "egf"

    def render(self) -> str:
        omega = self.homogeneous_operator()
        n_max, order = self.job.orders.n_max, self.job.orders.trunc
        if order > n_max:
            raise OrderMismatchError(f"--trunc {order} needs --rows of at least {order}, got {n_max}")
        table = stirling_table(omega, n_max)
        g, phi = egf_extract(table, order)
        report = self.report(sheffer_check(table, g, phi))
        if self.job.format == "csv":
            rows = [[n, g[n], phi[n]] for n in range(order + 1)]
            return to_csv(rows, header=["n", "g", "phi"])
        if self.job.format == "latex":
            return f"g(x) = {series_to_latex(g.coeffs)}\n\\phi(x) = {series_to_latex(phi.coeffs)}\n"
        return self.json_text(self.document(operator=self.job.op, g=g.to_json(), phi=phi.to_json(),
                                            report=report.to_json()))

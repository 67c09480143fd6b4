from typing import Iterable, Optional

from rich.console import Console
from rich.table import Table

from weylab.reports import CheckReport

check_results = []


def add_result(report: CheckReport) -> None:
    first = str(report.mismatches[0]) if report.mismatches else "-"
    scope = "" if report.in_scope else " (out of proposition scope)"
    check_results.append((
        report.name,
        ("✅ Passed" if report.passed else "❌ Failed") + scope,
        f"{report.checked} entries",
        first,
    ))


def print_check_report(reports: Optional[Iterable[CheckReport]] = None, console: Optional[Console] = None) -> None:
    """Render the collected check reports, plus any given ones, as a table on stderr."""
    for report in reports or ():
        add_result(report)
    console = console or Console(stderr=True)
    table = Table(title="Check Report", show_lines=True)
    table.add_column("Check", style="cyan", justify="center")
    table.add_column("Result", style="green", justify="center")
    table.add_column("Checked", justify="center")
    table.add_column("First Mismatch", style="red", justify="center")

    for name, result, checked, detail in check_results:
        table.add_row(name, result, checked, detail)

    console.print(table)
    check_results.clear()

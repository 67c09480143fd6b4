from utils.formats import to_csv

from .base_command import BaseCommand


def _latex_word(i: int, j: int) -> str:
    parts = []
    if i:
        parts.append(f"(a^\\dagger)^{{{i}}}")
    if j:
        parts.append(f"a^{{{j}}}")
    return " ".join(parts)


class NormalOrderCommand(BaseCommand):
    """Normal form of an operator expression."""

    name = "normal-order"

    def render(self) -> str:
        f = self.operator()
        self.logger.info(f"✅ Normal form has {len(f)} terms")
        if not self.job.format_given:
            return f"{f.render()}\n"
        if self.job.format == "json":
            return self.json_text(self.document(operator=self.job.op, rendered=f.render(), terms=f.to_json()))
        rows = [[i, j, coeff] for (i, j), coeff in f.sorted_terms()]
        if self.job.format == "csv":
            return to_csv(rows, header=["i", "j", "coefficient"])
        pieces = []
        for i, j, coeff in rows:
            word = _latex_word(i, j)
            scalar = "" if coeff == 1 and word else str(coeff)
            pieces.append(" ".join(p for p in (scalar, word) if p))
        return (" + ".join(pieces) or "0").replace("+ -", "- ") + "\n"

"""
Rendering of exact tables and documents: CSV through pandas, LaTeX through
a Jinja2 template and JSON with a fixed key order.
"""

import io
import json
from typing import Any, Dict, List, Sequence

import pandas as pd
import sympy
from jinja2 import Environment, StrictUndefined

from weylab.exact import format_rational

_latex_env = Environment(
    block_start_string="<%", block_end_string="%>",
    variable_start_string="<<", variable_end_string=">>",
    comment_start_string="<#", comment_end_string="#>",
    trim_blocks=True, lstrip_blocks=True, undefined=StrictUndefined,
)

MATRIX_TEMPLATE = _latex_env.from_string(r"""\left\lceil
\begin{array}{<< "c" * (width + 1) >>}
<% for row in rows %>
<< row | join(" & ") >> & <% if loop.first %>\cdots<% endif %> \\
<% endfor %>
\vdots & << "& " * (width - 1) >>\ddots & \\
\end{array}
\right.""")

POLY_TEMPLATE = _latex_env.from_string(r"""\begin{aligned}
<% for line in lines %>
<< line >><% if not loop.last %> \\<% endif %>

<% endfor %>
\end{aligned}""")


def pad_rows(rows: Sequence[Sequence[Any]]) -> List[List[str]]:
    """Exact strings, zero-padded on the right to a common width; text cells pass through."""
    width = max((len(row) for row in rows), default=0)
    return [[v if isinstance(v, str) else format_rational(v) for v in row] + ["0"] * (width - len(row)) for row in rows]


def to_csv(rows: Sequence[Sequence[Any]], header: Sequence[str] = ()) -> str:
    padded = pad_rows(rows)
    columns = list(header) or [f"k{k}" for k in range(len(padded[0]) if padded else 0)]
    frame = pd.DataFrame(padded, columns=columns, dtype=str)
    buffer = io.StringIO()
    frame.to_csv(buffer, index=False, lineterminator="\n")
    return buffer.getvalue()


def matrix_to_latex(rows: Sequence[Sequence[Any]]) -> str:
    """Lower-left block in a left-ceiling bracket with continuation dots."""
    padded = pad_rows(rows)
    width = len(padded[0]) if padded else 1
    return MATRIX_TEMPLATE.render(rows=padded, width=width) + "\n"


def polys_to_latex(lines: Sequence[str]) -> str:
    return POLY_TEMPLATE.render(lines=list(lines)) + "\n"


def to_json_text(document: Dict[str, Any]) -> str:
    """Sorted keys and 2-space indentation so equal documents are byte-identical."""
    return json.dumps(document, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def series_to_latex(coeffs: Sequence[Any], symbol: str = "x") -> str:
    """Truncated series as a sympy-rendered polynomial plus an O-term."""
    x = sympy.Symbol(symbol)
    body = sum(
        (sympy.Rational(c.numerator, c.denominator) * x ** n for n, c in enumerate(coeffs)),
        sympy.Integer(0),
    )
    order = sympy.latex(x ** len(coeffs))
    return f"{sympy.latex(body)} + O({order})"

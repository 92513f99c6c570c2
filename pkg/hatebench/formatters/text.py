from __future__ import annotations

from typing import TYPE_CHECKING

from hatebench.formatters._base import MISSING, Formatter

if TYPE_CHECKING:
    from hatebench.evaluation.report import Report, ReportTable

MARK = "*"


class TextFormatter(Formatter):
    """Format a report as aligned plain-text columns.

    Output format::

        Weighted F1, monolingual scenario
        Language  linear_head
        en             0.812*

        * marks the row maximum
    """

    def format(self, report: Report) -> str:
        lines: list[str] = []
        for table in report.tables:
            lines.extend(self._table(table))
            lines.append("")
        lines.append(f"{MARK} marks the row maximum")
        lines.append("")
        lines.append("Sources:")
        lines.extend(f"  {source}" for source in report.sources)
        return "\n".join(lines) + "\n"

    @staticmethod
    def _table(table: ReportTable) -> list[str]:
        header = ["Language", *table.columns]
        body: list[list[str]] = []
        for row in table.rows:
            values = [row]
            for column in table.columns:
                cell = table.cell(row, column)
                if cell is None:
                    values.append(MISSING + " ")
                else:
                    values.append(cell.display + (MARK if cell.marked else " "))
            body.append(values)
        widths = [max(len(r[i]) for r in (header, *body)) for i in range(len(header))]

        def line(values: list[str]) -> str:
            first = values[0].ljust(widths[0])
            rest = [v.rjust(w) for v, w in zip(values[1:], widths[1:], strict=True)]
            return "  ".join([first, *rest]).rstrip()

        return [table.title, line(header), *(line(v) for v in body)]

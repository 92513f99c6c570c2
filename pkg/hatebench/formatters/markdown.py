from __future__ import annotations

from typing import TYPE_CHECKING

from hatebench.formatters._base import MISSING, Formatter

if TYPE_CHECKING:
    from hatebench.evaluation.report import Report, ReportTable


class MarkdownFormatter(Formatter):
    """Format a report as GitHub-flavoured Markdown tables.

    Row maxima are set in bold::

        | Language | linear_head | cnn_gru |
        |:---|---:|---:|
        | en | **0.812** | 0.790 |
    """

    def format(self, report: Report) -> str:
        lines: list[str] = []
        for table in report.tables:
            lines.extend(self._table(table))
            lines.append("")
        lines.append("Sources:")
        lines.extend(f"- `{source}`" for source in report.sources)
        return "\n".join(lines) + "\n"

    @staticmethod
    def _table(table: ReportTable) -> list[str]:
        lines = [
            f"### {table.title}",
            "",
            "| Language | " + " | ".join(table.columns) + " |",
            "|:---|" + "---:|" * len(table.columns),
        ]
        for row in table.rows:
            values: list[str] = []
            for column in table.columns:
                cell = table.cell(row, column)
                if cell is None:
                    values.append(MISSING)
                elif cell.marked:
                    values.append(f"**{cell.display}**")
                else:
                    values.append(cell.display)
            lines.append(f"| {row} | " + " | ".join(values) + " |")
        return lines

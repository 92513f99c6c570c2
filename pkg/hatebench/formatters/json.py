from __future__ import annotations

import json as _json
from typing import TYPE_CHECKING

from hatebench.formatters._base import Formatter

if TYPE_CHECKING:
    from hatebench.evaluation.report import Report


class JsonFormatter(Formatter):
    """Format a report as JSON with full-precision values."""

    def format(self, report: Report) -> str:
        data = {
            "axis": report.axis,
            "tables": [
                {
                    "title": table.title,
                    "columns": list(table.columns),
                    "rows": [
                        {
                            "language": row,
                            "cells": {
                                column: {
                                    "weighted_f1": cell.value,
                                    "marked": cell.marked,
                                    "source": cell.source,
                                }
                                for column in table.columns
                                if (cell := table.cell(row, column)) is not None
                            },
                        }
                        for row in table.rows
                    ],
                }
                for table in report.tables
            ],
            "sources": list(report.sources),
        }
        return _json.dumps(data, indent=2) + "\n"

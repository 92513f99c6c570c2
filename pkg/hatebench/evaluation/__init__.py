from __future__ import annotations

from hatebench.evaluation.metrics import (
    ConfusionMatrix,
    MetricResult,
    confusion_matrix,
    metrics_from_confusion,
    weighted_f1,
)
from hatebench.evaluation.report import Report, ReportCell, ReportTable, render_report

# evaluate_run is imported from hatebench.evaluation.evaluate, which needs
# hatebench.models.
__all__ = [
    "ConfusionMatrix",
    "MetricResult",
    "Report",
    "ReportCell",
    "ReportTable",
    "confusion_matrix",
    "metrics_from_confusion",
    "render_report",
    "weighted_f1",
]

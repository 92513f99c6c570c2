from __future__ import annotations

import json
from dataclasses import dataclass
from typing import TYPE_CHECKING, Any

from hatebench.errors import EvaluationError, PreconditionError
from hatebench.evaluation.metrics import (
    ConfusionMatrix,
    MetricResult,
    confusion_matrix,
    metrics_from_confusion,
    weighted_f1,
)
from hatebench.models import predict
from hatebench.record import record_hash

if TYPE_CHECKING:
    from collections.abc import Sequence
    from pathlib import Path

    from hatebench.embeddings import EmbeddingBackend, EmbeddingCache
    from hatebench.models import Model
    from hatebench.record import Record


@dataclass(frozen=True)
class PredictionRow:
    """One line of a prediction dump."""

    record_hash: str
    y_true: int
    y_pred: int
    p0: float
    p1: float

    def to_json(self) -> dict[str, Any]:
        return {
            "record_hash": self.record_hash,
            "y_true": self.y_true,
            "y_pred": self.y_pred,
            "p0": self.p0,
            "p1": self.p1,
        }


@dataclass(frozen=True)
class EvaluationResult:
    metric: MetricResult
    confusion: ConfusionMatrix
    rows: tuple[PredictionRow, ...]


def evaluate_run(
    model: Model,
    test_records: Sequence[Record],
    backend: EmbeddingBackend,
    cache: EmbeddingCache | None = None,
) -> EvaluationResult:
    """Score *model* on one language's full test split.

    Raises:
        EvaluationError: If *test_records* is empty.
        PreconditionError: If the records span several languages or are not
            all in the test split.
    """
    if not test_records:
        msg = "test split is empty"
        raise EvaluationError(msg)
    languages = {r.language for r in test_records}
    if len(languages) != 1:
        msg = (
            "test records must come from one language, got "
            f"{', '.join(sorted(languages))}"
        )
        raise PreconditionError(msg)
    if any(r.split != "test" for r in test_records):
        msg = "evaluate_run only scores records of the test split"
        raise PreconditionError(msg)

    predictions = predict(model, test_records, backend, cache)
    rows = tuple(
        PredictionRow(
            record_hash=record_hash(record),
            y_true=record.label,
            y_pred=prediction.label,
            p0=prediction.probabilities[0],
            p1=prediction.probabilities[1],
        )
        for record, prediction in zip(test_records, predictions, strict=True)
    )
    cm = confusion_matrix([r.y_true for r in rows], [r.y_pred for r in rows])
    return EvaluationResult(metric=metrics_from_confusion(cm), confusion=cm, rows=rows)


def write_prediction_dump(rows: Sequence[PredictionRow], path: Path) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8", newline="\n") as fh:
        for row in rows:
            fh.write(json.dumps(row.to_json(), sort_keys=True) + "\n")


def read_prediction_dump(path: Path) -> list[PredictionRow]:
    rows: list[PredictionRow] = []
    for line in path.read_text(encoding="utf-8").splitlines():
        if line.strip():
            data = json.loads(line)
            rows.append(
                PredictionRow(
                    record_hash=str(data["record_hash"]),
                    y_true=int(data["y_true"]),
                    y_pred=int(data["y_pred"]),
                    p0=float(data["p0"]),
                    p1=float(data["p1"]),
                )
            )
    return rows


def rescore_dump(path: Path) -> MetricResult:
    """Recompute the metric of a prediction dump without the model."""
    rows = read_prediction_dump(path)
    if not rows:
        msg = f"prediction dump {path} is empty"
        raise EvaluationError(msg)
    return weighted_f1([r.y_true for r in rows], [r.y_pred for r in rows])

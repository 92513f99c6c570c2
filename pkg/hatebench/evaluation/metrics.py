from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import TYPE_CHECKING, Any

import numpy as np

from hatebench.errors import ValidationError

if TYPE_CHECKING:
    from collections.abc import Sequence

Pair = tuple[float, float]


@dataclass(frozen=True)
class ConfusionMatrix:
    """Binary confusion counts with class 1 as the positive class."""

    tp: int
    fp: int
    tn: int
    fn: int

    def __post_init__(self) -> None:
        if min(self.tp, self.fp, self.tn, self.fn) < 0:
            msg = f"confusion counts must be non-negative: {self}"
            raise ValidationError(msg)

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.tn + self.fn

    def to_json(self) -> dict[str, int]:
        return asdict(self)

    @staticmethod
    def from_json(data: dict[str, Any]) -> ConfusionMatrix:
        return ConfusionMatrix(**{k: int(data[k]) for k in ("tp", "fp", "tn", "fn")})


@dataclass(frozen=True)
class MetricResult:
    """Support-weighted F1 with its per-class components.

    Every pair is indexed by class: ``(class 0, class 1)``.
    """

    weighted_f1: float
    per_class_f1: Pair
    per_class_precision: Pair
    per_class_recall: Pair
    support: tuple[int, int]

    def to_json(self) -> dict[str, Any]:
        return {
            k: list(v) if isinstance(v, tuple) else v for k, v in asdict(self).items()
        }

    @staticmethod
    def from_json(data: dict[str, Any]) -> MetricResult:
        return MetricResult(
            weighted_f1=float(data["weighted_f1"]),
            per_class_f1=_pair(data["per_class_f1"]),
            per_class_precision=_pair(data["per_class_precision"]),
            per_class_recall=_pair(data["per_class_recall"]),
            support=(int(data["support"][0]), int(data["support"][1])),
        )


def _pair(values: Sequence[float]) -> Pair:
    return float(values[0]), float(values[1])


def _ratio(num: float, den: float) -> float:
    return num / den if den else 0.0


def _labels(values: Sequence[int], name: str) -> np.ndarray:
    array = np.asarray(values)
    if array.ndim != 1 or not np.isin(array, (0, 1)).all():
        msg = f"{name} must contain only the labels 0 and 1"
        raise ValidationError(msg)
    return array.astype(np.int64)


def confusion_matrix(y_true: Sequence[int], y_pred: Sequence[int]) -> ConfusionMatrix:
    """Count outcomes of *y_pred* against *y_true*.

    Raises:
        ValidationError: On empty or unequal-length inputs, or labels
            outside {0, 1}.
    """
    if len(y_true) != len(y_pred):
        msg = f"y_true has {len(y_true)} labels but y_pred has {len(y_pred)}"
        raise ValidationError(msg)
    if len(y_true) == 0:
        msg = "cannot score an empty label list"
        raise ValidationError(msg)
    true = _labels(y_true, "y_true")
    pred = _labels(y_pred, "y_pred")
    counts = np.bincount(2 * true + pred, minlength=4)
    return ConfusionMatrix(
        tn=int(counts[0]), fp=int(counts[1]), fn=int(counts[2]), tp=int(counts[3])
    )


def metrics_from_confusion(cm: ConfusionMatrix) -> MetricResult:
    """Derive per-class and weighted scores from *cm*.

    Precision, recall and F1 are 0 wherever their denominator is 0.
    """
    # Class 0 swaps the roles of the two error cells.
    hits = (cm.tn, cm.tp)
    false_pos = (cm.fn, cm.fp)
    false_neg = (cm.fp, cm.fn)
    support = (cm.tn + cm.fp, cm.tp + cm.fn)

    precision = tuple(_ratio(hits[c], hits[c] + false_pos[c]) for c in (0, 1))
    recall = tuple(_ratio(hits[c], hits[c] + false_neg[c]) for c in (0, 1))
    f1 = tuple(
        _ratio(2 * precision[c] * recall[c], precision[c] + recall[c]) for c in (0, 1)
    )
    total = support[0] + support[1]
    weighted = sum(support[c] / total * f1[c] for c in (0, 1))
    return MetricResult(
        weighted_f1=float(weighted),
        per_class_f1=_pair(f1),
        per_class_precision=_pair(precision),
        per_class_recall=_pair(recall),
        support=support,
    )


def weighted_f1(y_true: Sequence[int], y_pred: Sequence[int]) -> MetricResult:
    """Return the support-weighted F1 of *y_pred* against *y_true*.

    Each class's F1 is weighted by its share of ``y_true``.

    Raises:
        ValidationError: On empty or unequal-length inputs, or labels
            outside {0, 1}.
    """
    return metrics_from_confusion(confusion_matrix(y_true, y_pred))

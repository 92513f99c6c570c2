from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Literal

from hatebench.errors import IngestionError, ValidationError

if TYPE_CHECKING:
    from hatebench.record import RawRecord

Verdict = Literal[0, 1, "reject"]
REJECT: Verdict = "reject"

RULE_KINDS = ("binary_passthrough", "category_map", "multi_attribute", "annotator_vote")
TIE_POLICIES = ("to_zero", "to_one", "drop")


def normalize_value(value: str) -> str:
    """Return the comparison form of a raw annotation value."""
    return value.strip().lower()


@dataclass(frozen=True)
class LabelMappingRule:
    """Per-source recipe converting a raw annotation into a binary label.

    Attributes:
        source_id: Dataset the rule applies to.
        kind: One of ``binary_passthrough``, ``category_map``,
            ``multi_attribute`` or ``annotator_vote``.
        columns: Annotation columns read from the payload.
        positive_values: Raw values mapped to ``1``.
        negative_values: Raw values mapped to ``0``.
        reject_values: Raw values that exclude the record.
        tie_policy: How an annotator tie resolves (``to_zero``, ``to_one``
            or ``drop``).
        separator: Delimiter between attribute values in one cell
            (``multi_attribute`` only).
    """

    source_id: str
    kind: str
    columns: tuple[str, ...] = ("label",)
    positive_values: frozenset[str] = frozenset()
    negative_values: frozenset[str] = frozenset()
    reject_values: frozenset[str] = frozenset()
    tie_policy: str = "to_zero"
    separator: str = "_"
    _normalized: tuple[frozenset[str], frozenset[str], frozenset[str]] = field(
        init=False, repr=False, compare=False
    )

    def __post_init__(self) -> None:
        if self.kind not in RULE_KINDS:
            msg = f"{self.source_id}: unknown rule kind {self.kind!r}"
            raise ValidationError(msg)
        if self.tie_policy not in TIE_POLICIES:
            msg = f"{self.source_id}: unknown tie_policy {self.tie_policy!r}"
            raise ValidationError(msg)
        if not self.columns:
            msg = f"{self.source_id}: rule names no annotation columns"
            raise ValidationError(msg)
        pos = frozenset(normalize_value(v) for v in self.positive_values)
        neg = frozenset(normalize_value(v) for v in self.negative_values)
        rej = frozenset(normalize_value(v) for v in self.reject_values)
        if pos & neg:
            msg = (
                f"{self.source_id}: values both positive and negative: "
                f"{sorted(pos & neg)}"
            )
            raise ValidationError(msg)
        if (pos | neg) & rej:
            msg = (
                f"{self.source_id}: rejected values overlap labels: "
                f"{sorted((pos | neg) & rej)}"
            )
            raise ValidationError(msg)
        object.__setattr__(self, "_normalized", (pos, neg, rej))

    @property
    def positives(self) -> frozenset[str]:
        return self._normalized[0]

    @property
    def negatives(self) -> frozenset[str]:
        return self._normalized[1]

    @property
    def rejects(self) -> frozenset[str]:
        return self._normalized[2]

    def cells(self, raw: RawRecord) -> list[str]:
        """Return the annotation cells of *raw* named by this rule.

        Raises:
            IngestionError: If a named column is missing from the payload.
        """
        values: list[str] = []
        for column in self.columns:
            if column not in raw.payload:
                msg = f"annotation column {column!r} missing from row {raw.row}"
                raise IngestionError(raw.source_id, msg)
            values.append(raw.payload[column])
        return values


class LabelMapper(ABC):
    """Base class for the rule kinds.

    Subclasses declare ``kind`` and implement ``resolve``.
    """

    @property
    @abstractmethod
    def kind(self) -> str: ...

    @abstractmethod
    def resolve(self, cells: list[str], rule: LabelMappingRule) -> Verdict:
        """Map the annotation cells of one record to a verdict.

        Args:
            cells: Raw annotation values, one per rule column.
            rule: The rule being applied.

        Returns:
            ``1``, ``0`` or ``"reject"``.

        Raises:
            RuleCoverageError: If a value is in none of the rule's sets.
        """

from __future__ import annotations

from hatebench.corpus.rules._base import (
    REJECT,
    LabelMapper,
    LabelMappingRule,
    Verdict,
    normalize_value,
)
from hatebench.errors import RuleCoverageError


class MultiAttribute(LabelMapper):
    """Sources annotating several attributes per record.

    A cell may hold several values joined by ``rule.separator`` (for example a
    sentiment of ``"hateful_offensive"``). Any hateful value makes the record
    positive; a record whose values are all negative is ``0``.
    """

    kind = "multi_attribute"

    def resolve(self, cells: list[str], rule: LabelMappingRule) -> Verdict:
        values: set[str] = set()
        for cell in cells:
            parts = cell.split(rule.separator) if rule.separator else [cell]
            values.update(normalize_value(p) for p in parts if p.strip())

        uncovered = values - rule.positives - rule.negatives - rule.rejects
        if uncovered:
            raise RuleCoverageError(rule.source_id, sorted(uncovered)[0])
        if values & rule.positives:
            return 1
        if values & rule.negatives:
            return 0
        return REJECT

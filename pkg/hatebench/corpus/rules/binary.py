from __future__ import annotations

from hatebench.corpus.rules._base import (
    REJECT,
    LabelMapper,
    LabelMappingRule,
    Verdict,
    normalize_value,
)
from hatebench.errors import RuleCoverageError

_DEFAULT_POSITIVE = frozenset({"1"})
_DEFAULT_NEGATIVE = frozenset({"0"})


class BinaryPassthrough(LabelMapper):
    """Sources that already carry a hate / not-hate column."""

    kind = "binary_passthrough"

    def resolve(self, cells: list[str], rule: LabelMappingRule) -> Verdict:
        value = normalize_value(cells[0])
        positives = rule.positives or _DEFAULT_POSITIVE
        negatives = rule.negatives or _DEFAULT_NEGATIVE
        if value in positives:
            return 1
        if value in negatives:
            return 0
        if value in rule.rejects:
            return REJECT
        raise RuleCoverageError(rule.source_id, cells[0])

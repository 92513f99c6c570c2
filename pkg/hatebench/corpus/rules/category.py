from __future__ import annotations

from hatebench.corpus.rules._base import (
    REJECT,
    LabelMapper,
    LabelMappingRule,
    Verdict,
    normalize_value,
)
from hatebench.errors import RuleCoverageError


class CategoryMap(LabelMapper):
    """Sources with one categorical column (e.g. normal / abusive / hate).

    Every hate sub-category is listed as positive; offensive-only taxonomies
    list ``offensive`` as positive as well.
    """

    kind = "category_map"

    def resolve(self, cells: list[str], rule: LabelMappingRule) -> Verdict:
        value = normalize_value(cells[0])
        if value in rule.positives:
            return 1
        if value in rule.negatives:
            return 0
        if value in rule.rejects:
            return REJECT
        raise RuleCoverageError(rule.source_id, cells[0])

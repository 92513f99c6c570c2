from __future__ import annotations

from hatebench.corpus.rules._base import (
    REJECT,
    LabelMapper,
    LabelMappingRule,
    Verdict,
    normalize_value,
)
from hatebench.errors import RuleCoverageError


class AnnotatorVote(LabelMapper):
    """Sources with one column per annotator.

    The majority label wins. Empty and rejected cells abstain; a record with
    no votes is rejected. Ties follow ``rule.tie_policy``.
    """

    kind = "annotator_vote"

    def resolve(self, cells: list[str], rule: LabelMappingRule) -> Verdict:
        yes = no = 0
        for cell in cells:
            value = normalize_value(cell)
            if value in rule.positives:
                yes += 1
            elif value in rule.negatives:
                no += 1
            elif value == "" or value in rule.rejects:
                continue
            else:
                raise RuleCoverageError(rule.source_id, cell)

        if yes == no == 0:
            return REJECT
        if yes > no:
            return 1
        if no > yes:
            return 0
        if rule.tie_policy == "to_one":
            return 1
        if rule.tie_policy == "drop":
            return REJECT
        return 0

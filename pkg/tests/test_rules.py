from __future__ import annotations

import pytest

from hatebench.corpus.rules import (
    REJECT,
    RULE_KINDS,
    LabelMappingRule,
    get_mapper,
    unify_labels,
)
from hatebench.errors import (
    IngestionError,
    PreconditionError,
    RegistryError,
    RuleCoverageError,
    ValidationError,
)
from hatebench.record import RawRecord


def _raw(source_id: str = "src", **payload: str) -> RawRecord:
    return RawRecord(source_id=source_id, payload=payload, language="en")


# ---------------------------------------------------------------------------
# Rule construction
# ---------------------------------------------------------------------------


class TestLabelMappingRule:
    """Verify rule invariants are checked on construction."""

    def test_overlapping_values_rejected(self) -> None:
        """A value cannot be both positive and negative."""
        with pytest.raises(ValidationError, match="both positive and negative"):
            LabelMappingRule(
                "src",
                "category_map",
                positive_values=frozenset({"Hate"}),
                negative_values=frozenset({"hate "}),
            )

    def test_reject_overlapping_label_rejected(self) -> None:
        """A rejected value cannot also map to a label."""
        with pytest.raises(ValidationError, match="overlap"):
            LabelMappingRule(
                "src",
                "category_map",
                positive_values=frozenset({"hate"}),
                reject_values=frozenset({"hate"}),
            )

    def test_unknown_kind_rejected(self) -> None:
        """Only the four rule kinds are accepted."""
        with pytest.raises(ValidationError, match="unknown rule kind"):
            LabelMappingRule("src", "regex")

    def test_unknown_tie_policy_rejected(self) -> None:
        """Tie policies are to_zero, to_one or drop."""
        with pytest.raises(ValidationError, match="tie_policy"):
            LabelMappingRule("src", "annotator_vote", tie_policy="coin_flip")

    def test_no_columns_rejected(self) -> None:
        """A rule must read at least one column."""
        with pytest.raises(ValidationError, match="no annotation columns"):
            LabelMappingRule("src", "binary_passthrough", columns=())


# ---------------------------------------------------------------------------
# unify_labels per rule kind
# ---------------------------------------------------------------------------


class TestBinaryPassthrough:
    """Verify sources that already carry a binary label."""

    rule = LabelMappingRule("src", "binary_passthrough")

    def test_zero_stays_zero(self) -> None:
        """A row labeled 0 maps to 0."""
        assert unify_labels(_raw(label="0"), self.rule) == 0

    def test_one_stays_one(self) -> None:
        """A row labeled 1 maps to 1."""
        assert unify_labels(_raw(label="1"), self.rule) == 1

    def test_unknown_value_is_coverage_error(self) -> None:
        """Values outside the rule raise instead of guessing."""
        with pytest.raises(RuleCoverageError) as exc_info:
            unify_labels(_raw(label="maybe"), self.rule)
        assert exc_info.value.value == "maybe"

    def test_reject_value(self) -> None:
        """Listed reject values exclude the row."""
        rule = LabelMappingRule(
            "src", "binary_passthrough", reject_values=frozenset({"spam"})
        )
        assert unify_labels(_raw(label="spam"), rule) == REJECT


class TestCategoryMap:
    """Verify single-column categorical taxonomies."""

    rule = LabelMappingRule(
        "src",
        "category_map",
        columns=("category",),
        positive_values=frozenset({"hateful", "offensive"}),
        negative_values=frozenset({"normal"}),
    )

    @pytest.mark.parametrize(
        ("value", "expected"),
        [("hateful", 1), ("offensive", 1), ("normal", 0), ("  NORMAL ", 0)],
    )
    def test_mapping(self, value: str, expected: int) -> None:
        """Offensive counts as hate; values compare case-insensitively."""
        assert unify_labels(_raw(category=value), self.rule) == expected

    def test_uncovered_value(self) -> None:
        """A category nobody listed raises RuleCoverageError."""
        with pytest.raises(RuleCoverageError, match="abusive"):
            unify_labels(_raw(category="abusive"), self.rule)


class TestMultiAttribute:
    """Verify sources with several sentiment values per record."""

    rule = LabelMappingRule(
        "src",
        "multi_attribute",
        columns=("sentiment",),
        positive_values=frozenset(
            {"hateful", "offensive", "disrespectful", "abusive", "fearful"}
        ),
        negative_values=frozenset({"normal"}),
    )

    def test_any_hateful_value_is_hate(self) -> None:
        """A sentiment set containing 'hateful' maps to 1."""
        assert unify_labels(_raw(sentiment="fearful_hateful"), self.rule) == 1

    def test_normal_is_not_hate(self) -> None:
        """A purely normal sentiment maps to 0."""
        assert unify_labels(_raw(sentiment="normal"), self.rule) == 0

    def test_hate_wins_over_normal(self) -> None:
        """Mixed normal and hateful values map to 1."""
        assert unify_labels(_raw(sentiment="normal_hateful"), self.rule) == 1

    def test_empty_cell_rejected(self) -> None:
        """A record with no attribute values is excluded."""
        assert unify_labels(_raw(sentiment=""), self.rule) == REJECT

    def test_uncovered_value(self) -> None:
        """Unknown attribute values are a coverage error."""
        with pytest.raises(RuleCoverageError):
            unify_labels(_raw(sentiment="sarcastic"), self.rule)


class TestAnnotatorVote:
    """Verify majority voting across annotator columns."""

    def _rule(self, tie_policy: str = "to_zero") -> LabelMappingRule:
        return LabelMappingRule(
            "src",
            "annotator_vote",
            columns=("a1", "a2"),
            positive_values=frozenset({"hate"}),
            negative_values=frozenset({"no-hate"}),
            tie_policy=tie_policy,
        )

    def test_majority(self) -> None:
        """Two of three votes decide."""
        rule = LabelMappingRule(
            "src",
            "annotator_vote",
            columns=("a1", "a2", "a3"),
            positive_values=frozenset({"hate"}),
            negative_values=frozenset({"no-hate"}),
        )
        assert unify_labels(_raw(a1="hate", a2="no-hate", a3="hate"), rule) == 1

    @pytest.mark.parametrize(
        ("policy", "expected"),
        [("to_zero", 0), ("to_one", 1), ("drop", REJECT)],
    )
    def test_tie_policy(self, policy: str, expected: object) -> None:
        """A split vote follows the tie policy."""
        raw = _raw(a1="hate", a2="no-hate")
        assert unify_labels(raw, self._rule(policy)) == expected

    def test_abstentions_ignored(self) -> None:
        """Empty cells do not vote."""
        assert unify_labels(_raw(a1="hate", a2=""), self._rule()) == 1

    def test_no_votes_rejected(self) -> None:
        """A record nobody annotated is excluded."""
        assert unify_labels(_raw(a1="", a2=""), self._rule()) == REJECT


# ---------------------------------------------------------------------------
# Preconditions and registry
# ---------------------------------------------------------------------------


class TestUnifyPreconditions:
    """Verify structural errors raised by unify_labels."""

    def test_missing_column_names_source_and_column(self) -> None:
        """A missing annotation column raises IngestionError naming both."""
        rule = LabelMappingRule("src", "binary_passthrough", columns=("hs",))
        with pytest.raises(IngestionError, match=r"src: annotation column 'hs'"):
            unify_labels(_raw(label="1"), rule)

    def test_rule_of_other_source(self) -> None:
        """A rule is only applied to its own source."""
        rule = LabelMappingRule("other", "binary_passthrough")
        with pytest.raises(PreconditionError, match="other"):
            unify_labels(_raw(label="1"), rule)


class TestRegistry:
    """Verify mapper discovery."""

    def test_every_kind_has_a_mapper(self) -> None:
        """Each rule kind resolves to a mapper of that kind."""
        for kind in RULE_KINDS:
            assert get_mapper(kind).kind == kind

    def test_unknown_kind(self) -> None:
        """Unknown kinds raise RegistryError listing the known ones."""
        with pytest.raises(RegistryError) as exc_info:
            get_mapper("regex")
        assert exc_info.value.known == tuple(sorted(RULE_KINDS))

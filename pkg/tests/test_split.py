from __future__ import annotations

from collections import Counter

import numpy as np
import pytest

from hatebench.errors import PreconditionError, StratificationError
from hatebench.record import Record
from hatebench.scenarios import optional_language_cap, split_corpus, stratified_split


def _records(n_zero: int, n_one: int, language: str = "en") -> list[Record]:
    labels = [0] * n_zero + [1] * n_one
    return [
        Record(f"post {language} {i}", label, language, "src", uid=f"src:{i}")
        for i, label in enumerate(labels)
    ]


def _labels(records: list[Record]) -> Counter[int]:
    return Counter(r.label for r in records)


class TestStratifiedSplit:
    """Verify per-class held-out splits."""

    def test_rounding(self) -> None:
        """Six zeros and four ones at 0.2 hold out one of each."""
        train, test = stratified_split(_records(6, 4), 0.2, seed=1)
        assert _labels(test) == Counter({0: 1, 1: 1})
        assert _labels(train) == Counter({0: 5, 1: 3})

    def test_half_rounds_up(self) -> None:
        """A class share of exactly .5 rounds up."""
        _, test = stratified_split(_records(5, 5), 0.5, seed=0)
        assert _labels(test) == Counter({0: 3, 1: 3})

    def test_split_fields(self) -> None:
        """Outputs carry their split and keep input order."""
        records = _records(8, 8)
        train, test = stratified_split(records, 0.25, seed=3)
        assert {r.split for r in train} == {"train"}
        assert {r.split for r in test} == {"test"}
        order = {r.uid: i for i, r in enumerate(records)}
        assert [order[r.uid] for r in train] == sorted(order[r.uid] for r in train)

    def test_disjoint_and_complete(self) -> None:
        """Train and test partition the corpus."""
        records = _records(30, 20)
        train, test = stratified_split(records, 0.2, seed=9)
        assert len(train) + len(test) == len(records)
        assert not {r.uid for r in train} & {r.uid for r in test}

    def test_deterministic(self) -> None:
        """The same seed gives the same partition."""
        records = _records(30, 20)
        assert stratified_split(records, 0.2, 4) == stratified_split(records, 0.2, 4)

    def test_seed_changes_partition(self) -> None:
        """Different seeds give different partitions."""
        records = _records(30, 20)
        _, a = stratified_split(records, 0.2, 4)
        _, b = stratified_split(records, 0.2, 5)
        assert {r.uid for r in a} != {r.uid for r in b}

    def test_independent_of_input_order(self) -> None:
        """Shuffling the input does not change test membership."""
        records = _records(30, 20)
        order = np.random.default_rng(0).permutation(len(records))
        shuffled = [records[i] for i in order]
        _, a = stratified_split(records, 0.2, 4)
        _, b = stratified_split(shuffled, 0.2, 4)
        assert {r.uid for r in a} == {r.uid for r in b}

    def test_class_fractions_preserved(self) -> None:
        """Train class counts stay within one record of the exact share."""
        rng = np.random.default_rng(2)
        for _ in range(50):
            n_zero, n_one = (int(v) for v in rng.integers(2, 80, size=2))
            ratio = float(rng.uniform(0.05, 0.95))
            train, _ = stratified_split(_records(n_zero, n_one), ratio, 0)
            counts = _labels(train)
            assert abs(counts[0] - n_zero * (1 - ratio)) <= 1
            assert abs(counts[1] - n_one * (1 - ratio)) <= 1

    def test_split_corpus_labels_everything(self) -> None:
        """split_corpus assigns a split to every record in place."""
        labelled = split_corpus(_records(4, 4), 0.25, 0)
        assert Counter(r.split for r in labelled) == Counter({"train": 6, "test": 2})

    def test_too_few_in_a_class(self) -> None:
        """A class with one record cannot be stratified."""
        with pytest.raises(StratificationError, match="class 1"):
            stratified_split(_records(5, 1), 0.2, 0)

    @pytest.mark.parametrize("ratio", [0.0, 1.0, -0.1, 1.5])
    def test_bad_ratio(self, ratio: float) -> None:
        """The ratio lies strictly between 0 and 1."""
        with pytest.raises(PreconditionError):
            stratified_split(_records(5, 5), ratio, 0)


class TestLanguageCap:
    """Verify the optional per-language training cap."""

    def test_caps_large_language(self) -> None:
        """100 English records capped at 50 keep 50."""
        capped = optional_language_cap(_records(60, 40), 50, seed=0)
        assert len(capped) == 50
        assert _labels(capped) == Counter({0: 30, 1: 20})

    def test_identity_under_cap(self) -> None:
        """A cap at or above the size keeps everything."""
        records = _records(6, 4)
        assert optional_language_cap(records, 10, seed=0) == records

    def test_per_language(self) -> None:
        """Each language is capped on its own."""
        records = _records(20, 20, "en") + _records(3, 2, "de")
        capped = optional_language_cap(records, 10, seed=0)
        assert Counter(r.language for r in capped) == Counter({"en": 10, "de": 5})

    def test_fractions_within_one(self) -> None:
        """Capped class counts stay within one of the proportional share."""
        capped = optional_language_cap(_records(37, 13), 20, seed=3)
        counts = _labels(capped)
        assert sum(counts.values()) == 20
        assert abs(counts[0] - 20 * 37 / 50) < 1
        assert abs(counts[1] - 20 * 13 / 50) < 1

    def test_bad_cap(self) -> None:
        """The cap is at least 1."""
        with pytest.raises(PreconditionError):
            optional_language_cap(_records(2, 2), 0, seed=0)

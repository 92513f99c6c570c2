from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import replace
from typing import TYPE_CHECKING

import numpy as np

from hatebench.errors import PreconditionError, StratificationError
from hatebench.record import record_hash

if TYPE_CHECKING:
    from collections.abc import Sequence

    from hatebench.record import Record


def _round_half_up(value: float) -> int:
    return math.floor(value + 0.5)


def _by_class(records: Sequence[Record]) -> dict[int, list[int]]:
    """Indices of *records* per label, ordered by content hash."""
    groups: dict[int, list[int]] = defaultdict(list)
    hashes = [record_hash(r) for r in records]
    for i in sorted(range(len(records)), key=hashes.__getitem__):
        groups[records[i].label].append(i)
    return groups


def _test_indices(records: Sequence[Record], test_ratio: float, seed: int) -> set[int]:
    if not 0 < test_ratio < 1:
        msg = f"test_ratio must lie strictly between 0 and 1, got {test_ratio}"
        raise PreconditionError(msg)
    groups = _by_class(records)
    for label in (0, 1):
        if len(groups.get(label, [])) < 2:  # noqa: PLR2004
            msg = (
                f"class {label} has {len(groups.get(label, []))} records; at least 2 "
                "are needed"
            )
            raise StratificationError(msg)

    rng = np.random.default_rng(seed)
    chosen: set[int] = set()
    for label in (0, 1):
        members = groups[label]
        n_test = _round_half_up(len(members) * test_ratio)
        order = rng.permutation(len(members))
        chosen.update(members[j] for j in order[:n_test])
    return chosen


def stratified_split(
    records: Sequence[Record],
    test_ratio: float,
    seed: int,
) -> tuple[list[Record], list[Record]]:
    """Split *records* into train and test sets, stratified by label.

    Class ``c`` contributes ``round(n_c * test_ratio)`` records (halves round
    up) to the test set. Membership depends only on record content, the
    ratio and the seed, never on input order. Both outputs keep input order
    and carry their ``split`` field.

    Raises:
        PreconditionError: If *test_ratio* is not strictly between 0 and 1.
        StratificationError: If a class has fewer than 2 records.
    """
    labelled = split_corpus(records, test_ratio, seed)
    return (
        [r for r in labelled if r.split == "train"],
        [r for r in labelled if r.split == "test"],
    )


def split_corpus(
    records: Sequence[Record],
    test_ratio: float,
    seed: int,
) -> list[Record]:
    """Return *records* in input order with their ``split`` assigned."""
    test = _test_indices(records, test_ratio, seed)
    return [
        replace(r, split="test" if i in test else "train")
        for i, r in enumerate(records)
    ]


def optional_language_cap(
    train_records: Sequence[Record],
    cap_per_language: int,
    seed: int,
) -> list[Record]:
    """Keep at most *cap_per_language* records per language.

    A language over the cap is subsampled per class in proportion to its
    class sizes (largest remainder), so each class share moves by less than
    one record. Languages at or under the cap are kept whole. Input order is
    preserved.

    Raises:
        PreconditionError: If *cap_per_language* is below 1.
    """
    if cap_per_language < 1:
        msg = f"cap_per_language must be at least 1, got {cap_per_language}"
        raise PreconditionError(msg)
    by_language: dict[str, list[int]] = defaultdict(list)
    for i, record in enumerate(train_records):
        by_language[record.language].append(i)

    rng = np.random.default_rng(seed)
    keep: set[int] = set()
    for language in sorted(by_language):
        indices = by_language[language]
        if len(indices) <= cap_per_language:
            keep.update(indices)
            continue
        subset = [train_records[i] for i in indices]
        groups = _by_class(subset)
        quotas = _allocate(
            {label: len(members) for label, members in groups.items()}, cap_per_language
        )
        for label in sorted(groups):
            members = groups[label]
            order = rng.permutation(len(members))
            keep.update(indices[members[j]] for j in order[: quotas[label]])
    return [r for i, r in enumerate(train_records) if i in keep]


def _allocate(sizes: dict[int, int], total: int) -> dict[int, int]:
    """Split *total* across classes proportionally, largest remainder first."""
    n = sum(sizes.values())
    exact = {label: size * total / n for label, size in sizes.items()}
    quotas = {label: math.floor(value) for label, value in exact.items()}
    leftover = total - sum(quotas.values())
    for label in sorted(exact, key=lambda c: (quotas[c] - exact[c], c))[:leftover]:
        quotas[label] += 1
    return quotas

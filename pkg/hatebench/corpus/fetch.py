from __future__ import annotations

import json
import logging
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Protocol

from hatebench.errors import IngestionError

if TYPE_CHECKING:
    from collections.abc import Callable, Mapping, Sequence
    from pathlib import Path

logger = logging.getLogger(__name__)


class LookupTransportError(Exception):
    """Raised by a lookup client when a batch request fails in transit."""


class TextLookupClient(Protocol):
    """Batch lookup of post texts by id.

    Implementations return a mapping that omits unknown ids and raise
    `LookupTransportError` on transport failures.
    """

    def lookup(self, ids: Sequence[str]) -> Mapping[str, str]: ...


class FixtureLookupClient:
    """Lookup client backed by a JSON object mapping id to text."""

    def __init__(self, texts: Mapping[str, str]) -> None:
        self._texts = dict(texts)

    @classmethod
    def from_file(cls, path: Path) -> FixtureLookupClient:
        try:
            data = json.loads(path.read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise IngestionError("fetch", f"cannot read fixture {path}: {exc}") from exc
        if not isinstance(data, dict):
            raise IngestionError("fetch", f"fixture {path} must be a JSON object")
        return cls({str(k): str(v) for k, v in data.items()})

    def lookup(self, ids: Sequence[str]) -> Mapping[str, str]:
        return {i: self._texts[i] for i in ids if i in self._texts}


@dataclass
class FetchResult:
    """Outcome of a text lookup.

    Attributes:
        texts: Every requested id mapped to its text, or ``None`` if missing.
        missing_count: Number of ids without text.
        failed_batches: Ids of batches that still failed after all retries.
    """

    texts: dict[str, str | None] = field(default_factory=dict)
    missing_count: int = 0
    failed_batches: list[tuple[str, ...]] = field(default_factory=list)


def fetch_texts(
    tweet_ids: Sequence[str],
    client: TextLookupClient,
    *,
    batch_size: int = 100,
    max_retries: int = 3,
    backoff: float = 0.5,
    jobs: int = 1,
    sleep: Callable[[float], None] = time.sleep,
) -> FetchResult:
    """Resolve post ids to texts through *client*.

    Ids are looked up in batches; a batch failing in transit is retried with
    exponential backoff and, after *max_retries* retries, recorded in the
    failure manifest while its ids are reported missing.

    Args:
        tweet_ids: Ids to resolve. Duplicates are looked up once.
        client: Lookup client.
        batch_size: Ids per request.
        max_retries: Retries per batch after the first attempt.
        backoff: Delay before the first retry, doubled on every retry.
        jobs: Number of batches looked up concurrently.
        sleep: Delay function (replaced in tests).

    Returns:
        A `FetchResult` covering every requested id.
    """
    unique = list(dict.fromkeys(tweet_ids))
    if not unique:
        return FetchResult()

    batches = [
        tuple(unique[i : i + batch_size]) for i in range(0, len(unique), batch_size)
    ]

    def run(batch: tuple[str, ...]) -> tuple[tuple[str, ...], Mapping[str, str] | None]:
        delay = backoff
        for attempt in range(max_retries + 1):
            try:
                return batch, client.lookup(batch)
            except LookupTransportError as exc:
                if attempt == max_retries:
                    logger.warning("Lookup of %d ids failed: %s", len(batch), exc)
                    break
                logger.info("Lookup failed (%s); retrying in %.2fs", exc, delay)
                sleep(delay)
                delay *= 2
        return batch, None

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            outcomes = list(pool.map(run, batches))
    else:
        outcomes = [run(b) for b in batches]

    result = FetchResult()
    for batch, found in outcomes:
        if found is None:
            result.failed_batches.append(batch)
            found = {}
        for tid in batch:
            result.texts[tid] = found.get(tid)
    result.missing_count = sum(1 for t in result.texts.values() if t is None)
    if result.missing_count:
        logger.warning(
            "%d of %d ids could not be resolved",
            result.missing_count,
            len(unique),
        )
    return result

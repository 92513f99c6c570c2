from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from typing import Literal

Split = Literal["train", "test", "unassigned"]

SUPPORTED_LANGUAGES: frozenset[str] = frozenset(
    {"en", "de", "fr", "es", "it", "da", "ar", "tr", "pt", "hi", "id"}
)
SPLITS: frozenset[str] = frozenset({"train", "test", "unassigned"})


@dataclass(frozen=True)
class RawRecord:
    """A single row of a source dataset before unification.

    Attributes:
        source_id: Dataset identifier (e.g. ``"ousidhoum-en"``).
        payload: Column name to raw string value.
        language: ISO 639-1 language code.
        row: Zero-based position of the row in its source file.
    """

    source_id: str
    payload: dict[str, str]
    language: str
    row: int = 0


@dataclass(frozen=True)
class Record:
    """One canonical labeled example.

    Attributes:
        text: Cleaned text.
        label: ``1`` for hate speech, ``0`` otherwise.
        language: ISO 639-1 language code.
        source_id: Dataset the example came from.
        split: ``"train"``, ``"test"`` or ``"unassigned"``.
        uid: Stable identity of the example, ``"<source_id>:<row>"``.
        raw_text: Text before cleaning and transliteration.
    """

    text: str
    label: int
    language: str
    source_id: str
    split: Split = "unassigned"
    uid: str = ""
    raw_text: str = ""

    def to_json(self) -> dict[str, object]:
        """Return the canonical JSON Lines object for this record."""
        return {
            "text": self.text,
            "label": self.label,
            "lang": self.language,
            "source": self.source_id,
            "split": self.split,
            "uid": self.uid,
            "raw": self.raw_text,
        }

    @staticmethod
    def from_json(data: dict[str, object]) -> Record:
        """Build a record from a canonical JSON Lines object."""
        split = str(data.get("split", "unassigned"))
        if split not in SPLITS:
            msg = f"invalid split {split!r}"
            raise ValueError(msg)
        return Record(
            text=str(data["text"]),
            label=int(str(data["label"])),
            language=str(data["lang"]),
            source_id=str(data["source"]),
            split=split,  # type: ignore[arg-type]
            uid=str(data.get("uid", "")),
            raw_text=str(data.get("raw", "")),
        )


@dataclass(frozen=True)
class CorpusStats:
    """Summary statistics of one language's corpus.

    Attributes:
        language: ISO 639-1 language code.
        n_examples: Number of surviving records.
        hate_fraction: Fraction of surviving records labeled ``1``.
        per_source_counts: Raw rows consumed per source (kept plus dropped).
        n_dropped: Rows rejected by a rule, left empty by cleaning, or
            whose text could not be fetched.
    """

    language: str
    n_examples: int
    hate_fraction: float
    per_source_counts: dict[str, int] = field(default_factory=dict)
    n_dropped: int = 0

    def to_json(self) -> dict[str, object]:
        return {
            "language": self.language,
            "n_examples": self.n_examples,
            "hate_fraction": self.hate_fraction,
            "per_source_counts": dict(sorted(self.per_source_counts.items())),
            "n_dropped": self.n_dropped,
        }

    @staticmethod
    def from_json(data: dict[str, object]) -> CorpusStats:
        counts = data.get("per_source_counts", {})
        if not isinstance(counts, dict):
            msg = "per_source_counts must be an object"
            raise TypeError(msg)
        return CorpusStats(
            language=str(data["language"]),
            n_examples=int(str(data["n_examples"])),
            hate_fraction=float(str(data["hate_fraction"])),
            per_source_counts={str(k): int(v) for k, v in counts.items()},
            n_dropped=int(str(data.get("n_dropped", 0))),
        )


def record_hash(record: Record) -> str:
    """Return the content hash identifying *record* across splits and runs."""
    parts = (record.uid, record.language, record.source_id, record.text)
    payload = "\x1f".join((*parts, str(record.label)))
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()

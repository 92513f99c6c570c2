"""Reading raw source files and the canonical JSON Lines corpus."""

from __future__ import annotations

import hashlib
import json
import os
from typing import TYPE_CHECKING

import pandas as pd

from hatebench.errors import IngestionError
from hatebench.record import CorpusStats, RawRecord, Record

if TYPE_CHECKING:
    from collections.abc import Iterator, Sequence
    from pathlib import Path

_SEPARATORS = {".csv": ",", ".tsv": "\t"}


def read_source(
    path: Path,
    source_id: str,
    language: str,
    fmt: str | None = None,
) -> Iterator[RawRecord]:
    """Yield the rows of a raw CSV, TSV or JSON Lines file as `RawRecord`.

    All values are read as strings; missing values become empty strings.

    Raises:
        IngestionError: If the file is missing, unreadable or empty.
    """
    if not path.is_file():
        raise IngestionError(source_id, f"raw file not found: {path}")
    kind = fmt or path.suffix.lower().lstrip(".")
    try:
        if kind in ("jsonl", "ndjson"):
            frame = pd.read_json(path, lines=True, dtype=False, convert_dates=False)
        elif kind in ("csv", "tsv"):
            frame = pd.read_csv(
                path,
                sep=_SEPARATORS[f".{kind}"],
                dtype=str,
                keep_default_na=False,
                encoding="utf-8",
            )
        else:
            raise IngestionError(source_id, f"unsupported source format {kind!r}")
    except (OSError, ValueError) as exc:
        raise IngestionError(source_id, f"cannot read {path}: {exc}") from exc

    frame = frame.fillna("").astype(str)
    for row, values in enumerate(frame.to_dict(orient="records")):
        payload = {str(k): str(v) for k, v in values.items()}
        if not payload:
            raise IngestionError(source_id, f"row {row} has no columns")
        yield RawRecord(
            source_id=source_id,
            payload=payload,
            language=language,
            row=row,
        )


def _dump(obj: dict[str, object]) -> str:
    return json.dumps(obj, ensure_ascii=False, sort_keys=False)


def write_corpus(records: Sequence[Record], path: Path) -> None:
    """Write *records* to *path* as UTF-8 JSON Lines, replacing it atomically."""
    tmp = path.with_name(path.name + ".tmp")
    with tmp.open("w", encoding="utf-8", newline="\n") as fh:
        for record in records:
            fh.write(_dump(record.to_json()) + "\n")
    os.replace(tmp, path)


def read_corpus(path: Path) -> list[Record]:
    """Read a canonical JSON Lines corpus.

    Raises:
        IngestionError: If the file is missing or a line is malformed.
    """
    if not path.is_file():
        raise IngestionError(path.stem, f"corpus file not found: {path}")
    records: list[Record] = []
    with path.open(encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                records.append(Record.from_json(json.loads(line)))
            except (ValueError, KeyError, TypeError) as exc:
                msg = f"{path}:{lineno}: malformed record ({exc})"
                raise IngestionError(path.stem, msg) from exc
    return records


def write_stats(stats: CorpusStats, path: Path) -> None:
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(json.dumps(stats.to_json(), indent=2) + "\n", encoding="utf-8")
    os.replace(tmp, path)


def read_stats(path: Path) -> CorpusStats:
    return CorpusStats.from_json(json.loads(path.read_text(encoding="utf-8")))


def snapshot_hash(path: Path) -> str:
    """Return the SHA-256 of a corpus file's bytes."""
    return hashlib.sha256(path.read_bytes()).hexdigest()

"""Building canonical corpus files from the sources declared in the config."""

from __future__ import annotations

import logging
from dataclasses import replace
from typing import TYPE_CHECKING

from hatebench.corpus.builder import CorpusSource, build_language_corpus
from hatebench.corpus.cleaning import load_stopwords
from hatebench.corpus.fetch import FixtureLookupClient, fetch_texts
from hatebench.corpus.store import read_source, write_corpus, write_stats
from hatebench.errors import IngestionError, PreconditionError

if TYPE_CHECKING:
    from collections.abc import Sequence
    from pathlib import Path

    from hatebench.config import FrameworkConfig, SourceManifest
    from hatebench.corpus.fetch import TextLookupClient
    from hatebench.record import CorpusStats, RawRecord, Record

logger = logging.getLogger(__name__)

# Failed ids named in the warning; the rest are only counted.
_SHOWN_IDS = 10


def _check_sources(
    config: FrameworkConfig,
    languages: Sequence[str],
    client: TextLookupClient | None = None,
) -> None:
    """Fail before reading anything if a declared input file is missing."""
    by_id = False
    for language in languages:
        sources = config.sources_for(language)
        if not sources:
            msg = f"no sources declared for language {language!r}"
            raise PreconditionError(msg)
        for source in sources:
            if not source.path.is_file():
                raise IngestionError(
                    source.source_id,
                    f"raw file not found: {source.path}",
                )
            by_id = by_id or source.id_column is not None
    fixture = config.fetch.fixture
    if by_id and client is None and fixture is not None and not fixture.is_file():
        raise IngestionError("fetch", f"lookup fixture not found: {fixture}")


def _lookup_client(config: FrameworkConfig) -> TextLookupClient | None:
    if config.fetch.fixture is None:
        return None
    return FixtureLookupClient.from_file(config.fetch.fixture)


def _resolve_texts(
    source: SourceManifest,
    rows: list[RawRecord],
    client: TextLookupClient | None,
    config: FrameworkConfig,
) -> list[RawRecord]:
    """Fill the text column of id-only rows through *client*."""
    if source.id_column is None or not rows or source.text_column in rows[0].payload:
        return rows
    if client is None:
        raise IngestionError(
            source.source_id,
            f"file has no {source.text_column!r} column and no lookup client is "
            "configured",
        )
    ids = [row.payload.get(source.id_column, "") for row in rows]
    result = fetch_texts(
        ids,
        client,
        batch_size=config.fetch.batch_size,
        max_retries=config.fetch.max_retries,
    )
    if result.failed_batches:
        failed_ids = [tid for batch in result.failed_batches for tid in batch]
        logger.warning(
            "%s: %d lookup batch(es) failed after %d retries; %d id(s) left "
            "without text: %s",
            source.source_id,
            len(result.failed_batches),
            config.fetch.max_retries,
            len(failed_ids),
            ", ".join(failed_ids[:_SHOWN_IDS]),
        )
    return [
        replace(
            row,
            payload={**row.payload, source.text_column: result.texts.get(tid) or ""},
        )
        for row, tid in zip(rows, ids, strict=True)
    ]


def build_language(
    config: FrameworkConfig,
    language: str,
    client: TextLookupClient | None = None,
) -> tuple[list[Record], CorpusStats]:
    """Read, resolve and merge the sources of *language* in memory."""
    _check_sources(config, [language], client)
    client = client if client is not None else _lookup_client(config)
    sources: list[CorpusSource] = []
    for manifest in config.sources_for(language):
        rows = list(
            read_source(manifest.path, manifest.source_id, language, manifest.format)
        )
        rows = _resolve_texts(manifest, rows, client, config)
        sources.append(
            CorpusSource(
                records=rows,
                rule=manifest.rule,
                text_column=manifest.text_column,
            ),
        )

    stopwords = load_stopwords(language, config.stopword_dir)
    return build_language_corpus(sources, language, stopwords)


def _write_language(
    config: FrameworkConfig,
    records: list[Record],
    stats: CorpusStats,
) -> tuple[Path, CorpusStats]:
    config.corpus_dir.mkdir(parents=True, exist_ok=True)
    path = config.corpus_path(stats.language)
    write_corpus(records, path)
    write_stats(stats, config.stats_path(stats.language))
    return path, stats


def ingest_language(
    config: FrameworkConfig,
    language: str,
    client: TextLookupClient | None = None,
) -> tuple[Path, CorpusStats]:
    """Build and write ``corpus/<language>.jsonl`` and its stats sidecar.

    Returns:
        The corpus path and its statistics.
    """
    records, stats = build_language(config, language, client)
    return _write_language(config, records, stats)


def ingest(
    config: FrameworkConfig,
    languages: Sequence[str] | None = None,
    client: TextLookupClient | None = None,
) -> list[tuple[Path, CorpusStats]]:
    """Ingest *languages*, or every language with declared sources.

    Every language is built in memory before any file is written, so a
    failure in one language leaves all corpus files as they were.

    Raises:
        PreconditionError: If nothing is declared to ingest.
        IngestionError: If a source file is missing or unreadable.
        RuleCoverageError: If a raw label is not covered by its rule.
        EmptyCorpusError: If a language ends up without records.
    """
    if languages:
        wanted = list(languages)
    else:
        wanted = sorted({s.language for s in config.sources})
    if not wanted:
        msg = "no sources declared in the configuration"
        raise PreconditionError(msg)
    _check_sources(config, wanted, client)
    built = [build_language(config, language, client) for language in wanted]
    return [_write_language(config, records, stats) for records, stats in built]

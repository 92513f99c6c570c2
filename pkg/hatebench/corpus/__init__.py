from __future__ import annotations

from hatebench.corpus.builder import (
    REFERENCE_STATS,
    REFERENCE_TOTAL,
    CorpusSource,
    build_language_corpus,
    compute_stats,
    validate_record,
)
from hatebench.corpus.cleaning import clean_text, load_stopwords
from hatebench.corpus.fetch import (
    FetchResult,
    FixtureLookupClient,
    LookupTransportError,
    TextLookupClient,
    fetch_texts,
)
from hatebench.corpus.ingest import ingest, ingest_language
from hatebench.corpus.rules import REJECT, LabelMappingRule, unify_labels
from hatebench.corpus.store import (
    read_corpus,
    read_source,
    read_stats,
    snapshot_hash,
    write_corpus,
    write_stats,
)
from hatebench.corpus.transliteration import SCHEME_BY_LANGUAGE, transliterate

__all__ = [
    "REFERENCE_STATS",
    "REFERENCE_TOTAL",
    "REJECT",
    "SCHEME_BY_LANGUAGE",
    "CorpusSource",
    "FetchResult",
    "FixtureLookupClient",
    "LabelMappingRule",
    "LookupTransportError",
    "TextLookupClient",
    "build_language_corpus",
    "clean_text",
    "compute_stats",
    "fetch_texts",
    "ingest",
    "ingest_language",
    "load_stopwords",
    "read_corpus",
    "read_source",
    "read_stats",
    "snapshot_hash",
    "transliterate",
    "unify_labels",
    "validate_record",
    "write_corpus",
    "write_stats",
]

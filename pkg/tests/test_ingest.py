from __future__ import annotations

import logging
import sys
from dataclasses import replace
from typing import TYPE_CHECKING
from unittest.mock import patch

import pytest

from hatebench.config import FrameworkConfig
from hatebench.corpus import (
    FixtureLookupClient,
    LookupTransportError,
    ingest,
    ingest_language,
    read_corpus,
    read_stats,
    validate_record,
)
from hatebench.errors import IngestionError, PreconditionError, RuleCoverageError
from hatebench.fixtures import TOY_LANGUAGES, toy_vocabulary, write_toy_workspace

if TYPE_CHECKING:
    from collections.abc import Mapping, Sequence
    from pathlib import Path


@pytest.fixture
def toy_config(tmp_path: Path) -> FrameworkConfig:
    workspace = write_toy_workspace(tmp_path, n_records=100)
    return FrameworkConfig.load(workspace.config, env={})


class TestIngest:
    """Verify building corpus files from the toy sources."""

    def test_all_languages(self, toy_config: FrameworkConfig) -> None:
        """Every declared language gets a corpus and a stats sidecar."""
        results = ingest(toy_config)
        assert [stats.language for _, stats in results] == list(TOY_LANGUAGES)
        for path, stats in results:
            assert path == toy_config.corpus_path(stats.language)
            assert read_stats(toy_config.stats_path(stats.language)) == stats

    def test_rejected_rows(self, toy_config: FrameworkConfig) -> None:
        """Rows the rule rejects are dropped and counted."""
        _, stats = ingest_language(toy_config, "xa")
        assert stats.n_examples == 100
        assert stats.n_dropped == 2
        assert stats.hate_fraction == 0.4

    def test_category_source(self, toy_config: FrameworkConfig) -> None:
        """Offensive and hateful categories both count as hate."""
        _, stats = ingest_language(toy_config, "xb")
        assert stats.n_examples == 100
        assert stats.hate_fraction == 0.4

    def test_id_only_source(self, toy_config: FrameworkConfig) -> None:
        """Id-only rows are resolved through the lookup; missing ones drop."""
        _, stats = ingest_language(toy_config, "xc")
        assert stats.per_source_counts == {"toy-xc": 100, "toy-xc-ids": 20}
        assert stats.n_dropped == 4
        assert stats.n_examples == 116

    def test_records_valid_and_cleaned(self, toy_config: FrameworkConfig) -> None:
        """Every written record is valid, lowercased and stopword-free."""
        path, _ = ingest_language(toy_config, "xa")
        function_words = set(toy_vocabulary("xa").function)
        for record in read_corpus(path):
            validate_record(record)
            assert record.text == record.text.lower()
            assert not function_words & set(record.text.split())
            assert record.split == "unassigned"

    def test_deterministic(self, toy_config: FrameworkConfig) -> None:
        """Rebuilding gives byte-identical files."""
        path, _ = ingest_language(toy_config, "xc")
        first = path.read_bytes()
        ingest_language(toy_config, "xc")
        assert path.read_bytes() == first

    def test_explicit_client(self, toy_config: FrameworkConfig) -> None:
        """A caller-provided client replaces the configured fixture."""
        _, stats = ingest_language(toy_config, "xc", client=FixtureLookupClient({}))
        assert stats.n_dropped == 20


class TestIngestErrors:
    """Verify ingestion fails before writing anything."""

    def test_missing_raw_file(self, toy_config: FrameworkConfig) -> None:
        """A missing source file aborts all languages."""
        (toy_config.root / "raw" / "xb.tsv").unlink()
        with pytest.raises(IngestionError, match="toy-xb"):
            ingest(toy_config)
        assert not toy_config.corpus_path("xa").exists()

    def test_missing_lookup_fixture(self, toy_config: FrameworkConfig) -> None:
        """A missing lookup fixture is reported before any source is read."""
        (toy_config.root / "raw" / "lookup.json").unlink()
        with (
            patch.object(
                sys.modules["hatebench.corpus.ingest"], "read_source"
            ) as read_source,
            pytest.raises(IngestionError, match="lookup fixture not found"),
        ):
            ingest(toy_config)
        read_source.assert_not_called()
        assert not toy_config.corpus_path("xa").exists()

    def test_undeclared_language(self, toy_config: FrameworkConfig) -> None:
        """A language without sources cannot be ingested."""
        with pytest.raises(PreconditionError, match="no sources"):
            ingest(toy_config, ["en"])

    def test_later_failure_writes_nothing(self, toy_config: FrameworkConfig) -> None:
        """An uncovered label in one language leaves every corpus unwritten."""
        with (toy_config.root / "raw" / "xb.tsv").open("a", encoding="utf-8") as fh:
            fh.write("some late post\tsarcasm\n")
        with pytest.raises(RuleCoverageError, match="sarcasm"):
            ingest(toy_config)
        assert not toy_config.corpus_dir.exists() or not any(
            toy_config.corpus_dir.iterdir()
        )

    def test_later_failure_keeps_previous_files(
        self, toy_config: FrameworkConfig
    ) -> None:
        """Corpus files from an earlier ingest survive a failed one untouched."""
        ingest(toy_config)
        before = toy_config.corpus_path("xa").read_bytes()
        with (toy_config.root / "raw" / "xb.tsv").open("a", encoding="utf-8") as fh:
            fh.write("some late post\tsarcasm\n")
        with pytest.raises(RuleCoverageError):
            ingest(toy_config)
        assert toy_config.corpus_path("xa").read_bytes() == before


class _DownClient:
    def lookup(self, ids: Sequence[str]) -> Mapping[str, str]:
        msg = "service unavailable"
        raise LookupTransportError(msg)


class TestLookupFailures:
    """Verify failed lookups are reported, not mistaken for deleted posts."""

    def test_failed_batches_logged(
        self, toy_config: FrameworkConfig, caplog: pytest.LogCaptureFixture
    ) -> None:
        """Ids of batches that never succeeded are named in a warning."""
        config = replace(toy_config, fetch=replace(toy_config.fetch, max_retries=0))
        with caplog.at_level(logging.WARNING, logger="hatebench.corpus.ingest"):
            _, stats = ingest_language(config, "xc", client=_DownClient())
        assert stats.n_dropped == 20
        assert "toy-xc-ids: 3 lookup batch(es) failed" in caplog.text
        assert "9100000" in caplog.text

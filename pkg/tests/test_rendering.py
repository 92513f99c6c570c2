"""Tests for the rich-based rendering module."""

from __future__ import annotations

from io import StringIO
from pathlib import Path

from rich.console import Console

from hatebench import rendering
from hatebench.corpus import REFERENCE_STATS, REFERENCE_TOTAL
from hatebench.evaluation import Report, ReportCell, ReportTable
from hatebench.record import CorpusStats
from hatebench.scenarios import ScenarioOutcome


def _capture(func, *args):  # type: ignore[no-untyped-def]
    """Call *func* while capturing console output and return the text."""
    buf = StringIO()
    original = rendering.console
    rendering.console = Console(file=buf, highlight=False, width=200)
    try:
        func(*args)
    finally:
        rendering.console = original
    return buf.getvalue()


class TestPrintIngested:
    """Verify print_ingested output."""

    def test_lines_and_summary(self) -> None:
        """Each language gets a line and the total is summarized."""
        results = [
            (
                Path("corpus/en.jsonl"),
                CorpusStats("en", 10, 0.3, {"s": 12}, n_dropped=2),
            ),
            (Path("corpus/de.jsonl"), CorpusStats("de", 5, 0.2, {"t": 5})),
        ]
        out = _capture(rendering.print_ingested, results)
        assert "en 10 records (2 dropped) -> corpus/en.jsonl" in out
        assert "Ingested 2 language(s)." in out


class TestPrintStats:
    """Verify print_stats output."""

    def test_reference_drift(self) -> None:
        """Known languages show the reference size and the drift from it."""
        out = _capture(rendering.print_stats, [CorpusStats("de", 5570, 0.3)])
        assert "5568 / 0.26" in out
        assert "+2 / +0.04" in out
        assert "Total: 5570 examples in 1 language(s)." in out

    def test_unknown_language(self) -> None:
        """Languages without reference figures show dashes."""
        out = _capture(rendering.print_stats, [CorpusStats("xa", 7, 0.5)])
        line = next(ln for ln in out.splitlines() if ln.startswith("xa"))
        assert line.split()[-2:] == ["-", "-"]

    def test_reference_total_drift(self) -> None:
        """With every reference language present the published total is compared."""
        stats = [
            CorpusStats(lang, n, hate) for lang, (n, hate) in REFERENCE_STATS.items()
        ]
        stats.append(CorpusStats("xa", 1000, 0.5))
        out = _capture(rendering.print_stats, stats)
        # The published total exceeds the sum of its per-language rows.
        assert f"Reference total: {REFERENCE_TOTAL} (drift -3875)" in out

    def test_partial_collection_has_no_total_drift(self) -> None:
        """A subset of the reference languages is not compared to the total."""
        out = _capture(rendering.print_stats, [CorpusStats("en", 65553, 0.35)])
        assert "Reference total" not in out


class TestPrintReport:
    """Verify print_report output."""

    def test_table_and_sources(self) -> None:
        """Titles, values, dashes and source paths are printed."""
        table = ReportTable(
            title="Weighted F1, monolingual scenario",
            columns=("linear_head", "cnn_gru"),
            rows=("en",),
            cells={
                ("en", "linear_head"): ReportCell(
                    0.81234, "r1/manifest.json", marked=True
                ),
            },
        )
        report = Report(axis="model", tables=(table,), sources=("r1/manifest.json",))
        out = _capture(rendering.print_report, report)
        assert "Weighted F1, monolingual scenario" in out
        assert "0.812" in out
        row = next(ln for ln in out.splitlines() if ln.startswith("en"))
        assert row.split()[1:] == ["0.812", "-"]
        assert "Sources:" in out
        assert "  r1/manifest.json" in out


class TestPrintOutcome:
    """Verify print_outcome output."""

    def test_plural(self) -> None:
        """A scenario without models is reported in the plural."""
        outcome = ScenarioOutcome(
            run_id="20260101-abc", directory=Path("runs/20260101-abc")
        )
        out = _capture(rendering.print_outcome, outcome)
        assert "Scenario 20260101-abc: trained 0 models." in out

    def test_reports_listed(self) -> None:
        """Report paths are listed."""
        outcome = ScenarioOutcome(
            run_id="r",
            directory=Path("runs/r"),
            reports=[Path("runs/r/report.md")],
        )
        out = _capture(rendering.print_outcome, outcome)
        assert "report:   runs/r/report.md" in out

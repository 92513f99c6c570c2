"""Rich-based CLI rendering for hatebench output."""

from __future__ import annotations

from typing import TYPE_CHECKING

from rich.console import Console
from rich.table import Table
from rich.text import Text

from hatebench.corpus import REFERENCE_STATS, REFERENCE_TOTAL

if TYPE_CHECKING:
    from pathlib import Path

    from hatebench.evaluation import Report
    from hatebench.record import CorpusStats
    from hatebench.scenarios import ScenarioOutcome

console = Console(highlight=False)

STYLE_ACCENT = "bold sky_blue1"
STYLE_SUCCESS = "bold dark_orange"
STYLE_BEST = "bold"


def print_ingested(results: list[tuple[Path, CorpusStats]]) -> None:
    """Print one line per written corpus file."""
    for path, stats in results:
        line = Text()
        line.append(f"{stats.language} ", style=STYLE_ACCENT)
        line.append(f"{stats.n_examples} records ({stats.n_dropped} dropped) -> {path}")
        console.print(line)
    console.print(f"Ingested {len(results)} language(s).", style=STYLE_SUCCESS)


def print_stats(stats: list[CorpusStats]) -> None:
    """Print per-language statistics next to the reference collection's."""
    table = Table(box=None, pad_edge=False)
    table.add_column("Language", style=STYLE_ACCENT)
    table.add_column("Examples", justify="right")
    table.add_column("Hate", justify="right")
    table.add_column("Dropped", justify="right")
    table.add_column("Reference", justify="right")
    table.add_column("Drift", justify="right")
    for s in stats:
        reference = REFERENCE_STATS.get(s.language)
        if reference is None:
            ref_text, drift = "-", "-"
        else:
            ref_n, ref_hate = reference
            ref_text = f"{ref_n} / {ref_hate:.2f}"
            drift = f"{s.n_examples - ref_n:+d} / {s.hate_fraction - ref_hate:+.2f}"
        table.add_row(
            s.language,
            str(s.n_examples),
            f"{s.hate_fraction:.2f}",
            str(s.n_dropped),
            ref_text,
            drift,
        )
    console.print(table)
    total = sum(s.n_examples for s in stats)
    console.print(
        f"Total: {total} examples in {len(stats)} language(s).",
        style=STYLE_ACCENT,
    )
    # The published total only applies to the full reference collection.
    if set(REFERENCE_STATS) <= {s.language for s in stats}:
        covered = sum(s.n_examples for s in stats if s.language in REFERENCE_STATS)
        drift_total = covered - REFERENCE_TOTAL
        console.print(f"Reference total: {REFERENCE_TOTAL} (drift {drift_total:+d})")


def print_report(report: Report) -> None:
    """Print report tables, row maxima in bold, with their manifest paths."""
    for table_data in report.tables:
        console.print(table_data.title, style=STYLE_ACCENT)
        table = Table(box=None, pad_edge=False)
        table.add_column("Language", style=STYLE_ACCENT)
        for column in table_data.columns:
            table.add_column(column, justify="right")
        for row in table_data.rows:
            values: list[Text] = []
            for column in table_data.columns:
                cell = table_data.cell(row, column)
                if cell is None:
                    values.append(Text("-"))
                else:
                    style = STYLE_BEST if cell.marked else ""
                    values.append(Text(cell.display, style=style))
            table.add_row(row, *values)
        console.print(table)
        console.print()
    console.print("Sources:")
    for source in report.sources:
        console.print(f"  {source}")


def print_outcome(outcome: ScenarioOutcome) -> None:
    """Print where a finished scenario wrote its artifacts."""
    n = len(outcome.manifests)
    console.print(
        f"Scenario {outcome.run_id}: trained {n} model{'s' if n != 1 else ''}.",
        style=STYLE_SUCCESS,
    )
    for manifest in outcome.manifests:
        console.print(f"  manifest: {manifest.path}")
    for path in outcome.reports:
        console.print(f"  report:   {path}")

"""Comparison tables over run manifests."""

from __future__ import annotations

import logging
from collections import defaultdict
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Literal

from hatebench.errors import PreconditionError, ProvenanceError

if TYPE_CHECKING:
    from collections.abc import Sequence

    from hatebench.scenarios.manifest import RunManifest

logger = logging.getLogger(__name__)

ScenarioAxis = Literal["model", "scenario"]
SCENARIO_AXES: tuple[ScenarioAxis, ...] = ("model", "scenario")

SCENARIO_COLUMNS = {
    "monolingual": "Monolingual",
    "multilingual": "Multilingual",
    "language_family": "Language Family",
}
MODEL_ORDER = ("linear_head", "cnn_gru", "contextual_finetune")
DECIMALS = 3


@dataclass(frozen=True)
class ReportCell:
    """One weighted F1 score and the manifest it came from."""

    value: float
    source: str
    marked: bool = False

    @property
    def display(self) -> str:
        return f"{self.value:.{DECIMALS}f}"


@dataclass(frozen=True)
class ReportTable:
    """Languages as rows, model families or scenarios as columns."""

    title: str
    columns: tuple[str, ...]
    rows: tuple[str, ...]
    cells: dict[tuple[str, str], ReportCell] = field(default_factory=dict)

    def cell(self, row: str, column: str) -> ReportCell | None:
        return self.cells.get((row, column))

    def marked(self, row: str) -> list[str]:
        """Columns holding the row maximum."""
        return [
            c
            for c in self.columns
            if (cell := self.cell(row, c)) is not None and cell.marked
        ]


@dataclass(frozen=True)
class Report:
    axis: ScenarioAxis
    tables: tuple[ReportTable, ...]
    sources: tuple[str, ...]


def _check_provenance(manifests: Sequence[RunManifest]) -> None:
    seen: dict[str, dict[str, list[str]]] = defaultdict(lambda: defaultdict(list))
    for manifest in manifests:
        for lang, digest in manifest.corpus_hashes.items():
            seen[lang][digest].append(manifest.path or manifest.run_id)
    for lang, by_hash in sorted(seen.items()):
        if len(by_hash) > 1:
            groups = "; ".join(
                f"{digest[:12]}: {', '.join(sorted(paths))}"
                for digest, paths in sorted(by_hash.items())
            )
            msg = f"runs use different {lang} corpus snapshots ({groups})"
            raise ProvenanceError(msg)


def _mark_maxima(
    rows: Sequence[str],
    columns: Sequence[str],
    cells: dict[tuple[str, str], ReportCell],
) -> dict[tuple[str, str], ReportCell]:
    # Maxima are taken over the displayed values so printed ties are all marked.
    marked = dict(cells)
    for row in rows:
        present = [(c, cells[row, c]) for c in columns if (row, c) in cells]
        if not present:
            continue
        best = max(round(cell.value, DECIMALS) for _, cell in present)
        for column, cell in present:
            if round(cell.value, DECIMALS) == best:
                marked[row, column] = ReportCell(cell.value, cell.source, marked=True)
    return marked


def _column_of(manifest: RunManifest, axis: ScenarioAxis) -> str:
    return manifest.model_family if axis == "model" else SCENARIO_COLUMNS[manifest.kind]


def _group_of(manifest: RunManifest, axis: ScenarioAxis) -> str:
    return manifest.kind if axis == "model" else manifest.model_family


def _ordered_columns(found: set[str], axis: ScenarioAxis) -> tuple[str, ...]:
    order = MODEL_ORDER if axis == "model" else tuple(SCENARIO_COLUMNS.values())
    return tuple(c for c in order if c in found) + tuple(sorted(found - set(order)))


def _title(group: str, axis: ScenarioAxis) -> str:
    if axis == "model":
        return f"Weighted F1, {SCENARIO_COLUMNS.get(group, group).lower()} scenario"
    return f"Weighted F1, {group} across scenarios"


def render_report(
    manifests: Sequence[RunManifest],
    scenario_axis: ScenarioAxis = "model",
) -> Report:
    """Lay out the weighted F1 of *manifests* as comparison tables.

    With ``scenario_axis="model"`` there is one table per scenario kind and
    a column per model family; with ``"scenario"`` one table per model
    family and the columns Monolingual, Multilingual and Language Family.
    Every row marks its maximum at three decimals, ties included.

    Raises:
        PreconditionError: If *manifests* is empty or the axis is unknown.
        ProvenanceError: If two manifests used different snapshots of the
            same language's corpus.
    """
    if scenario_axis not in SCENARIO_AXES:
        msg = f"scenario_axis must be one of {', '.join(SCENARIO_AXES)}"
        raise PreconditionError(msg)
    complete = [m for m in manifests if m.status == "complete"]
    for skipped in (m for m in manifests if m.status != "complete"):
        logger.warning("Skipping %s run %s", skipped.status, skipped.run_id)
    if not complete:
        msg = "no completed runs to report"
        raise PreconditionError(msg)
    _check_provenance(complete)

    grouped: dict[str, list[RunManifest]] = defaultdict(list)
    for manifest in sorted(complete, key=lambda m: (m.path, m.run_id)):
        grouped[_group_of(manifest, scenario_axis)].append(manifest)

    group_order = (
        [k for k in SCENARIO_COLUMNS if k in grouped]
        if scenario_axis == "model"
        else [k for k in MODEL_ORDER if k in grouped]
    )
    group_order += sorted(set(grouped) - set(group_order))

    tables: list[ReportTable] = []
    for group in group_order:
        cells: dict[tuple[str, str], ReportCell] = {}
        for manifest in grouped[group]:
            column = _column_of(manifest, scenario_axis)
            for lang, result in manifest.results.items():
                if (lang, column) in cells:
                    logger.warning(
                        "%s replaces %s for %s/%s",
                        manifest.path,
                        cells[lang, column].source,
                        lang,
                        column,
                    )
                cells[lang, column] = ReportCell(
                    result.metric.weighted_f1,
                    manifest.path,
                )
        rows = tuple(sorted({row for row, _ in cells}))
        columns = _ordered_columns({column for _, column in cells}, scenario_axis)
        tables.append(
            ReportTable(
                title=_title(group, scenario_axis),
                columns=columns,
                rows=rows,
                cells=_mark_maxima(rows, columns, cells),
            )
        )
    sources = tuple(sorted({m.path for m in complete}))
    return Report(axis=scenario_axis, tables=tuple(tables), sources=sources)

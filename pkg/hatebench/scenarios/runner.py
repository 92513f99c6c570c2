"""Execution of the three experiment protocols.

Every scenario kind goes through ``execute_spec``: gather the train splits
of the training languages, shuffle their union with the run seed, train one
model and evaluate it on each test language separately.
"""

from __future__ import annotations

import json
import logging
import shutil
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from multiprocessing import get_context
from typing import TYPE_CHECKING, Any

import numpy as np

from hatebench.corpus import compute_stats, read_corpus, read_stats, snapshot_hash
from hatebench.embeddings import BUILTIN_BACKENDS, EmbeddingCache, get_backend
from hatebench.errors import (
    HatebenchError,
    LeakageError,
    PipelineError,
    PreconditionError,
    StageFailedError,
)
from hatebench.evaluation import render_report
from hatebench.evaluation.evaluate import evaluate_run, write_prediction_dump
from hatebench.formatters import get_formatter
from hatebench.models import get_family, save_checkpoint, train
from hatebench.record import record_hash
from hatebench.scenarios.manifest import (
    MANIFEST_NAME,
    LanguageResult,
    RunManifest,
    compute_run_id,
    utc_now,
    write_manifest,
)
from hatebench.scenarios.spec import FamilyRegistry, ScenarioPlan, ScenarioSpec
from hatebench.scenarios.split import optional_language_cap, split_corpus

if TYPE_CHECKING:
    from collections.abc import Iterable, Sequence
    from pathlib import Path

    from hatebench.config import FrameworkConfig
    from hatebench.record import CorpusStats, Record

logger = logging.getLogger(__name__)

SCENARIO_INDEX = "scenario.json"
FAILED_DIR = "failed"
REPORT_FORMATS = {"report.md": "markdown", "report.txt": "text"}


@dataclass(frozen=True)
class RunContext:
    """Framework-level settings shared by every run of a command.

    Attributes:
        config: Loaded framework configuration.
        backend_id: Backend override from the command line.
        force: Replace existing run directories.
        jobs: Worker processes for monolingual scenarios.
        use_cache: Read and fill the embedding cache when one is configured.
    """

    config: FrameworkConfig
    backend_id: str | None = None
    force: bool = False
    jobs: int = 1
    use_cache: bool = True


@dataclass(frozen=True)
class LanguageData:
    """One language's corpus with its splits assigned."""

    language: str
    records: tuple[Record, ...]
    snapshot: str
    stats: CorpusStats

    @property
    def train(self) -> list[Record]:
        return [r for r in self.records if r.split == "train"]

    @property
    def test(self) -> list[Record]:
        return [r for r in self.records if r.split == "test"]


@dataclass
class ScenarioOutcome:
    run_id: str
    directory: Path
    manifests: list[RunManifest] = field(default_factory=list)
    reports: list[Path] = field(default_factory=list)


def default_backend_id(model_family: str, config: FrameworkConfig) -> str:
    """Pick the backend a family uses when none is named.

    Raises:
        PreconditionError: If no declared backend has the family's
            granularity.
    """
    granularity = get_family(model_family).granularity
    for decl in config.backends:
        if decl.kind == granularity:
            return decl.backend_id
    for backend_id, backend in BUILTIN_BACKENDS.items():
        if backend.granularity == granularity:
            return backend_id
    msg = f"{model_family} needs a {granularity} backend; declare one in hatebench.toml"
    raise PreconditionError(msg)


def load_splits(
    config: FrameworkConfig,
    languages: Iterable[str],
    test_ratio: float,
    seed: int,
) -> dict[str, LanguageData]:
    """Read and split the corpus of every language in *languages*.

    All corpus files are checked before any is read, so a missing one fails
    the command before training starts.

    Raises:
        PreconditionError: If a language has no corpus file.
    """
    wanted = sorted(set(languages))
    missing = [lang for lang in wanted if not config.corpus_path(lang).is_file()]
    if missing:
        msg = (
            f"missing corpus for {', '.join(missing)} under {config.corpus_dir}; "
            "run `hatebench ingest` first"
        )
        raise PreconditionError(msg)

    data: dict[str, LanguageData] = {}
    for lang in wanted:
        path = config.corpus_path(lang)
        records = read_corpus(path)
        stats_path = config.stats_path(lang)
        if stats_path.is_file():
            stats = read_stats(stats_path)
        else:
            stats = compute_stats(records)
        data[lang] = LanguageData(
            language=lang,
            records=tuple(split_corpus(records, test_ratio, seed)),
            snapshot=snapshot_hash(path),
            stats=stats,
        )
    return data


def check_leakage(
    train_records: Sequence[Record],
    test_records: Sequence[Record],
) -> None:
    """Raise LeakageError if any test record's content hash is in training."""
    seen = {record_hash(r) for r in train_records}
    overlap = seen & {record_hash(r) for r in test_records}
    if overlap:
        msg = f"{len(overlap)} test records also appear in the training set"
        raise LeakageError(msg)


def training_set(spec: ScenarioSpec, data: dict[str, LanguageData]) -> list[Record]:
    """Union of the training languages' train splits, shuffled with the seed."""
    records = [r for lang in sorted(spec.train_languages) for r in data[lang].train]
    if spec.cap_per_language is not None:
        records = optional_language_cap(records, spec.cap_per_language, spec.seed)
    order = np.random.default_rng(spec.seed).permutation(len(records))
    return [records[i] for i in order]


def _open_cache(context: RunContext) -> EmbeddingCache | None:
    directory = context.config.embedding_cache_dir
    if directory is None or not context.use_cache:
        return None
    return EmbeddingCache(directory)


def _claim_run_dir(run_dir: Path, *, force: bool) -> None:
    if run_dir.exists():
        if not force:
            msg = (
                f"run {run_dir.name} already exists in {run_dir.parent}; "
                "pass --force to replace it"
            )
            raise PreconditionError(msg)
        shutil.rmtree(run_dir)
    run_dir.mkdir(parents=True)


def _retain_failed(
    manifest: RunManifest,
    run_dir: Path,
    stage: str,
    exc: Exception,
) -> None:
    """Move a failed run's artifacts under ``failed/`` and record the error."""
    manifest.status = "failed"
    manifest.finished_at = utc_now()
    manifest.error = {"stage": stage, "message": str(exc)}
    failed = run_dir / FAILED_DIR
    failed.mkdir(exist_ok=True)
    for item in sorted(run_dir.iterdir()):
        if item.name != FAILED_DIR:
            shutil.move(str(item), str(failed / item.name))
    write_manifest(manifest, failed)
    (failed / "error.txt").write_text(
        f"stage: {stage}\n{type(exc).__name__}: {exc}\n",
        encoding="utf-8",
    )
    logger.error("Run %s failed at stage %s: %s", manifest.run_id, stage, exc)


def execute_spec(
    spec: ScenarioSpec,
    run_id: str,
    data: dict[str, LanguageData],
    context: RunContext,
) -> RunManifest:
    """Train one model for *spec* and evaluate it per test language.

    The manifest is written before training and rewritten once every
    language is scored. On failure the run directory's contents move to
    ``failed/`` and the error is re-raised as a PipelineError naming the
    stage, unless it already is a hatebench error.
    """
    config = context.config
    run_dir = config.runs_dir / run_id
    _claim_run_dir(run_dir, force=context.force)
    backend = get_backend(spec.backend_id, config)
    cache = _open_cache(context)

    manifest = RunManifest(
        run_id=run_id,
        scenario=spec,
        corpus_hashes={lang: data[lang].snapshot for lang in spec.train_languages},
        backend=backend.describe(),
        corpus_stats={lang: data[lang].stats for lang in spec.train_languages},
        split_sizes={
            lang: {"train": len(data[lang].train), "test": len(data[lang].test)}
            for lang in spec.train_languages
        },
        started_at=utc_now(),
        path=f"{run_id}/{MANIFEST_NAME}",
    )
    write_manifest(manifest, run_dir)
    started = time.perf_counter()

    stage = "split"
    try:
        train_records = training_set(spec, data)
        manifest.train_size = len(train_records)
        check_leakage(
            train_records,
            [r for lang in spec.test_languages for r in data[lang].test],
        )
        manifest.leakage_check = "passed"

        stage = "train"
        family = get_family(spec.model_family)
        model = family.build(backend, spec.train_config)
        model, history = train(model, train_records, backend, spec.train_config, cache)
        manifest.history = history.to_json()
        manifest.model_spec = {**model.spec.to_json(), "input_text": family.input_text}
        save_checkpoint(model, run_dir / "model", history, backend=backend.describe())
        manifest.model_dir = "model"
        write_manifest(manifest, run_dir)

        stage = "evaluate"
        for lang in sorted(spec.test_languages):
            result = evaluate_run(model, data[lang].test, backend, cache)
            dump = f"predictions/{lang}.jsonl"
            write_prediction_dump(result.rows, run_dir / dump)
            manifest.results[lang] = LanguageResult(
                result.metric,
                result.confusion,
                dump,
            )
            logger.info(
                "%s %s: weighted F1 %.4f",
                run_id,
                lang,
                result.metric.weighted_f1,
            )
    except HatebenchError as exc:
        _retain_failed(
            manifest,
            run_dir,
            exc.stage if isinstance(exc, PipelineError) else stage,
            exc,
        )
        raise
    except Exception as exc:  # noqa: BLE001
        _retain_failed(manifest, run_dir, stage, exc)
        raise StageFailedError(stage, str(exc)) from exc

    manifest.status = "complete"
    manifest.finished_at = utc_now()
    manifest.wall_clock_seconds = round(time.perf_counter() - started, 3)
    write_manifest(manifest, run_dir)
    return manifest


def _execute_in_worker(
    job: tuple[ScenarioSpec, str, dict[str, LanguageData], RunContext],
) -> RunManifest:
    spec, run_id, data, context = job
    return execute_spec(spec, run_id, data, context)


def _scenario_payload(
    plan: ScenarioPlan,
    specs: Sequence[ScenarioSpec],
) -> dict[str, Any]:
    return {"plan": plan.to_json(), "runs": [s.to_json() for s in specs]}


def run_scenario(plan: ScenarioPlan, context: RunContext) -> ScenarioOutcome:
    """Run every model *plan* asks for and write the scenario report.

    Raises:
        PreconditionError: On a missing corpus or an existing run without
            ``force``, before any model is trained.
        RegistryError: On an unknown backend, model or language family.
    """
    config = context.config
    registry = FamilyRegistry.from_config(config)
    backend_id = (
        context.backend_id
        or plan.backend_id
        or default_backend_id(plan.model_family, config)
    )
    get_backend(backend_id, config)
    specs = plan.expand(config, registry, backend_id)
    first = specs[0]
    languages = {lang for spec in specs for lang in spec.train_languages}
    data = load_splits(config, languages, first.test_ratio, first.seed)

    base = compute_run_id(
        _scenario_payload(plan, specs),
        {lang: d.snapshot for lang, d in data.items()},
        first.seed,
    )
    if plan.kind == "monolingual":
        run_ids = [f"{base}-{spec.train_languages[0]}" for spec in specs]
    else:
        run_ids = [base]
    base_dir = config.runs_dir / base
    if not context.force:
        taken = [rid for rid in {base, *run_ids} if (config.runs_dir / rid).exists()]
        if taken:
            msg = (
                f"run {', '.join(sorted(taken))} already exists; "
                "pass --force to replace it"
            )
            raise PreconditionError(msg)

    jobs = [
        (spec, rid, data, context)
        for spec, rid in zip(specs, run_ids, strict=True)
    ]
    if context.jobs > 1 and len(jobs) > 1:
        # Workers write their own run directories and skip the shared cache.
        worker_context = replace(context, use_cache=False, jobs=1)
        jobs = [(s, rid, d, worker_context) for s, rid, d, _ in jobs]
        with ProcessPoolExecutor(
            max_workers=context.jobs,
            mp_context=get_context("spawn"),
        ) as pool:
            manifests = list(pool.map(_execute_in_worker, jobs))
    else:
        manifests = [_execute_in_worker(job) for job in jobs]

    outcome = ScenarioOutcome(run_id=base, directory=base_dir, manifests=manifests)
    if plan.kind == "monolingual":
        if base_dir.exists():
            shutil.rmtree(base_dir)
        base_dir.mkdir(parents=True)
        index = {
            "run_id": base,
            "kind": plan.kind,
            "plan": plan.to_json(),
            "runs": [m.path for m in manifests],
        }
        (base_dir / SCENARIO_INDEX).write_text(
            json.dumps(index, indent=2, sort_keys=True) + "\n", encoding="utf-8"
        )
    report = render_report(manifests, scenario_axis="model")
    for name, fmt in REPORT_FORMATS.items():
        formatter = get_formatter(fmt)
        path = base_dir / name
        path.write_text(formatter.format(report), encoding="utf-8", newline="\n")
        outcome.reports.append(path)
    return outcome


def run_monolingual(
    languages: Sequence[str],
    model_family: str,
    context: RunContext,
    **options: Any,
) -> list[RunManifest]:
    """Train and test one independent model per language."""
    plan = ScenarioPlan(
        kind="monolingual",
        model_family=model_family,
        languages=tuple(languages),
        **options,
    )
    return run_scenario(plan, context).manifests


def run_multilingual(
    languages: Sequence[str],
    model_family: str,
    context: RunContext,
    **options: Any,
) -> RunManifest:
    """Train one model on all *languages* and test it on each one."""
    plan = ScenarioPlan(
        kind="multilingual",
        model_family=model_family,
        languages=tuple(languages),
        **options,
    )
    return run_scenario(plan, context).manifests[0]


def run_family(
    family_name: str,
    model_family: str,
    context: RunContext,
    **options: Any,
) -> RunManifest:
    """Train one model on a language family and test it on each member."""
    plan = ScenarioPlan(
        kind="language_family",
        model_family=model_family,
        family_name=family_name,
        **options,
    )
    return run_scenario(plan, context).manifests[0]

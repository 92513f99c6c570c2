from __future__ import annotations

import hashlib
import json
import os
from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import TYPE_CHECKING, Any, Literal

from hatebench import __version__
from hatebench.errors import ValidationError
from hatebench.evaluation.metrics import ConfusionMatrix, MetricResult
from hatebench.record import CorpusStats
from hatebench.scenarios.spec import ScenarioSpec

if TYPE_CHECKING:
    from collections.abc import Mapping
    from pathlib import Path

MANIFEST_NAME = "manifest.json"
RunStatus = Literal["running", "complete", "failed"]


def compute_run_id(
    payload: Mapping[str, Any],
    corpus_hashes: Mapping[str, str],
    seed: int,
    now: datetime | None = None,
) -> str:
    """Return ``<UTC date>-<hash>`` for a scenario.

    The hash covers the scenario payload, the corpus snapshot hashes and the
    seed, so an identical rerun on the same day gets the same id.
    """
    stamp = (now or datetime.now(timezone.utc)).strftime("%Y%m%d")
    blob = json.dumps(
        {
            "scenario": payload,
            "corpus": dict(sorted(corpus_hashes.items())),
            "seed": seed,
        },
        sort_keys=True,
    )
    return f"{stamp}-{hashlib.sha256(blob.encode('utf-8')).hexdigest()[:10]}"


@dataclass(frozen=True)
class LanguageResult:
    """Evaluation of one model on one language's test split."""

    metric: MetricResult
    confusion: ConfusionMatrix
    predictions: str

    def to_json(self) -> dict[str, Any]:
        return {
            "metric": self.metric.to_json(),
            "confusion": self.confusion.to_json(),
            "n_test": self.confusion.total,
            "predictions": self.predictions,
        }

    @staticmethod
    def from_json(data: dict[str, Any]) -> LanguageResult:
        return LanguageResult(
            metric=MetricResult.from_json(data["metric"]),
            confusion=ConfusionMatrix.from_json(data["confusion"]),
            predictions=str(data["predictions"]),
        )


@dataclass
class RunManifest:
    """Provenance record of one trained model and its evaluations.

    Written with status ``running`` before any metric exists and rewritten
    when the run completes or fails. ``path`` is where it was read from,
    relative to the runs directory; it is not serialized.
    """

    run_id: str
    scenario: ScenarioSpec
    corpus_hashes: dict[str, str]
    backend: dict[str, Any]
    corpus_stats: dict[str, CorpusStats] = field(default_factory=dict)
    split_sizes: dict[str, dict[str, int]] = field(default_factory=dict)
    train_size: int = 0
    status: RunStatus = "running"
    results: dict[str, LanguageResult] = field(default_factory=dict)
    history: list[dict[str, Any]] = field(default_factory=list)
    model_spec: dict[str, Any] | None = None
    model_dir: str | None = None
    leakage_check: str = "pending"
    started_at: str = ""
    finished_at: str | None = None
    wall_clock_seconds: float | None = None
    code_version: str = __version__
    error: dict[str, str] | None = None
    path: str = ""

    @property
    def seed(self) -> int:
        return self.scenario.seed

    @property
    def kind(self) -> str:
        return self.scenario.kind

    @property
    def model_family(self) -> str:
        return self.scenario.model_family

    def to_json(self) -> dict[str, Any]:
        return {
            "run_id": self.run_id,
            "status": self.status,
            "scenario": self.scenario.to_json(),
            "seed": self.seed,
            "corpus_hashes": dict(sorted(self.corpus_hashes.items())),
            "backend": self.backend,
            "corpus_stats": {
                k: v.to_json() for k, v in sorted(self.corpus_stats.items())
            },
            "split_sizes": dict(sorted(self.split_sizes.items())),
            "train_size": self.train_size,
            "leakage_check": self.leakage_check,
            "results": {k: v.to_json() for k, v in sorted(self.results.items())},
            "history": self.history,
            "model_spec": self.model_spec,
            "model_dir": self.model_dir,
            "started_at": self.started_at,
            "finished_at": self.finished_at,
            "wall_clock_seconds": self.wall_clock_seconds,
            "code_version": self.code_version,
            "error": self.error,
        }

    @staticmethod
    def from_json(data: dict[str, Any], path: str = "") -> RunManifest:
        return RunManifest(
            run_id=str(data["run_id"]),
            scenario=ScenarioSpec.from_json(data["scenario"]),
            corpus_hashes=dict(data["corpus_hashes"]),
            backend=dict(data["backend"]),
            corpus_stats={
                k: CorpusStats.from_json(v)
                for k, v in data.get("corpus_stats", {}).items()
            },
            split_sizes=dict(data.get("split_sizes", {})),
            train_size=int(data.get("train_size", 0)),
            status=data.get("status", "running"),
            results={
                k: LanguageResult.from_json(v)
                for k, v in data.get("results", {}).items()
            },
            history=list(data.get("history", [])),
            model_spec=data.get("model_spec"),
            model_dir=data.get("model_dir"),
            leakage_check=str(data.get("leakage_check", "pending")),
            started_at=str(data.get("started_at", "")),
            finished_at=data.get("finished_at"),
            wall_clock_seconds=data.get("wall_clock_seconds"),
            code_version=str(data.get("code_version", "")),
            error=data.get("error"),
            path=path,
        )


def write_manifest(manifest: RunManifest, run_dir: Path) -> Path:
    """Write *manifest* to ``run_dir/manifest.json`` atomically."""
    run_dir.mkdir(parents=True, exist_ok=True)
    path = run_dir / MANIFEST_NAME
    tmp = path.with_suffix(".json.tmp")
    tmp.write_text(
        json.dumps(manifest.to_json(), indent=2, sort_keys=True) + "\n",
        encoding="utf-8",
        newline="\n",
    )
    os.replace(tmp, path)
    return path


def read_manifest(path: Path, runs_dir: Path | None = None) -> RunManifest:
    """Read a manifest file.

    Raises:
        ValidationError: If the file is unreadable or malformed.
    """
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
        relative = (path.relative_to(runs_dir) if runs_dir else path).as_posix()
        return RunManifest.from_json(data, relative)
    except (OSError, ValueError, KeyError, TypeError) as exc:
        msg = f"cannot read manifest {path}: {exc}"
        raise ValidationError(msg) from exc


def utc_now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")

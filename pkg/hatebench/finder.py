from __future__ import annotations

import json
from typing import TYPE_CHECKING

from hatebench.errors import PreconditionError, ValidationError
from hatebench.scenarios import MANIFEST_NAME, read_manifest
from hatebench.scenarios.runner import SCENARIO_INDEX

if TYPE_CHECKING:
    from collections.abc import Sequence
    from pathlib import Path

    from hatebench.scenarios import RunManifest


def find_manifests(
    runs_dir: Path,
    run_ids: Sequence[str] = (),
    *,
    kind: str | None = None,
    model: str | None = None,
) -> list[RunManifest]:
    """Collect run manifests under *runs_dir*, sorted by path.

    A run id naming a monolingual scenario expands to its per-language runs
    through the scenario index. Failed runs keep their manifest under
    ``failed/`` and are never collected.

    Args:
        runs_dir: Directory holding one subdirectory per run.
        run_ids: Restrict to these runs or scenarios; empty means all.
        kind: Keep only this scenario kind.
        model: Keep only this model family.

    Raises:
        PreconditionError: If a requested run id does not exist.
        ValidationError: If a manifest or scenario index is malformed.
    """
    if run_ids:
        paths: list[Path] = []
        for run_id in run_ids:
            paths.extend(_manifest_paths(runs_dir, run_id))
    else:
        paths = sorted(runs_dir.glob(f"*/{MANIFEST_NAME}")) if runs_dir.is_dir() else []

    manifests = [read_manifest(p, runs_dir) for p in sorted(set(paths))]
    if kind is not None:
        manifests = [m for m in manifests if m.kind == kind]
    if model is not None:
        manifests = [m for m in manifests if m.model_family == model]
    return manifests


def _manifest_paths(runs_dir: Path, run_id: str) -> list[Path]:
    run_dir = runs_dir / run_id
    manifest = run_dir / MANIFEST_NAME
    if manifest.is_file():
        return [manifest]
    index = run_dir / SCENARIO_INDEX
    if index.is_file():
        try:
            data = json.loads(index.read_text(encoding="utf-8"))
            runs = [str(p) for p in data["runs"]]
        except (OSError, ValueError, KeyError, TypeError) as exc:
            msg = f"cannot read scenario index {index}: {exc}"
            raise ValidationError(msg) from exc
        return [runs_dir / p for p in runs]
    msg = f"no run {run_id!r} under {runs_dir}"
    raise PreconditionError(msg)

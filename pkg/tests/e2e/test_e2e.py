from __future__ import annotations

import json
import subprocess
import sys
from typing import TYPE_CHECKING

if TYPE_CHECKING:
    from pathlib import Path


def _run_hatebench(*args: str, cwd: Path) -> subprocess.CompletedProcess[str]:
    """Run the hatebench CLI as a subprocess."""
    return subprocess.run(  # noqa: S603
        [sys.executable, "-m", "hatebench", *args],
        cwd=cwd,
        capture_output=True,
        text=True,
        check=False,
    )


def _toy(tmp_path: Path) -> Path:
    """Write and ingest a small toy workspace, returning its directory."""
    result = _run_hatebench("toy", "ws", "--records", "40", cwd=tmp_path)
    assert result.returncode == 0, result.stderr
    cwd = tmp_path / "ws"
    result = _run_hatebench("ingest", cwd=cwd)
    assert result.returncode == 0, result.stderr
    return cwd


class TestPipelineE2E:
    """End-to-end runs of every scenario kind on the toy datasets."""

    def test_all_scenarios_then_report(self, tmp_path: Path) -> None:
        """Monolingual, multilingual and family runs feed one report."""
        cwd = _toy(tmp_path)
        for scenario in ("monolingual", "multilingual", "family"):
            result = _run_hatebench("run", f"scenarios/{scenario}.toml", cwd=cwd)
            assert result.returncode == 0, result.stderr
            assert "Scenario " in result.stdout

        result = _run_hatebench("report", "--format", "json", cwd=cwd)
        assert result.returncode == 0, result.stderr
        data = json.loads(result.stdout)
        (table,) = data["tables"]
        assert table["columns"] == ["Monolingual", "Multilingual", "Language Family"]
        by_language = {row["language"]: row["cells"] for row in table["rows"]}
        assert sorted(by_language) == ["xa", "xb", "xc"]
        assert "Language Family" not in by_language["xc"]
        # 3 monolingual runs, 1 multilingual and 1 family run.
        assert len(data["sources"]) == 5

    def test_scenario_reports_written(self, tmp_path: Path) -> None:
        """Each scenario directory holds Markdown and text reports."""
        cwd = _toy(tmp_path)
        result = _run_hatebench("run", "scenarios/multilingual.toml", cwd=cwd)
        assert result.returncode == 0, result.stderr
        (run_dir,) = [p for p in (cwd / "runs").iterdir() if p.is_dir()]
        assert (run_dir / "manifest.json").is_file()
        assert (run_dir / "report.md").read_text().startswith("### Weighted F1")
        assert "* marks the row maximum" in (run_dir / "report.txt").read_text()

    def test_rerun_reproduces_reports(self, tmp_path: Path) -> None:
        """The same command with the same seed rewrites identical reports."""
        cwd = _toy(tmp_path)
        args = ("run", "scenarios/family.toml", "--seed", "5")
        assert _run_hatebench(*args, cwd=cwd).returncode == 0
        (run_dir,) = [p for p in (cwd / "runs").iterdir() if p.is_dir()]
        names = ("report.md", "report.txt")
        before = {name: (run_dir / name).read_bytes() for name in names}
        result = _run_hatebench(*args, "--force", cwd=cwd)
        assert result.returncode == 0, result.stderr
        assert {name: (run_dir / name).read_bytes() for name in names} == before

    def test_token_model(self, tmp_path: Path) -> None:
        """The CNN-GRU scenario runs on the toy token backend."""
        cwd = _toy(tmp_path)
        result = _run_hatebench("run", "scenarios/cnn_gru.toml", cwd=cwd)
        assert result.returncode == 0, result.stderr
        assert "trained 1 model." in result.stdout


class TestErrorsE2E:
    """End-to-end checks of exit codes."""

    def test_run_before_ingest_exits_1(self, tmp_path: Path) -> None:
        """A missing corpus is a validation error."""
        assert _run_hatebench("toy", "ws", cwd=tmp_path).returncode == 0
        result = _run_hatebench(
            "run", "--kind", "multilingual", cwd=tmp_path / "ws"
        )
        assert result.returncode == 1
        assert "error:" in result.stderr

    def test_invalid_config_exits_1(self, tmp_path: Path) -> None:
        """A malformed hatebench.toml is reported with exit code 1."""
        (tmp_path / "hatebench.toml").write_text("seed = 'x'\n")
        result = _run_hatebench("stats", cwd=tmp_path)
        assert result.returncode == 1
        assert "seed must be an integer" in result.stderr

    def test_no_command_exits_2(self, tmp_path: Path) -> None:
        """Invoking without a subcommand prints help and exits 2."""
        result = _run_hatebench(cwd=tmp_path)
        assert result.returncode == 2
        assert "usage: hatebench" in result.stdout

from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import replace
from pathlib import Path
from typing import TYPE_CHECKING

from rich.console import Console
from rich.logging import RichHandler

from hatebench.config import FrameworkConfig
from hatebench.corpus import compute_stats, ingest, read_corpus, read_stats
from hatebench.errors import PipelineError, PreconditionError, ValidationError
from hatebench.evaluation import render_report
from hatebench.finder import find_manifests
from hatebench.fixtures import write_toy_workspace
from hatebench.formatters import FORMATTERS, get_formatter
from hatebench.models import FAMILIES
from hatebench.rendering import (
    console,
    print_ingested,
    print_outcome,
    print_report,
    print_stats,
)
from hatebench.scenarios import (
    SCENARIO_KINDS,
    RunContext,
    ScenarioPlan,
    load_scenario,
    run_scenario,
)

if TYPE_CHECKING:
    from collections.abc import Sequence

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_RUNTIME = 2


def main(argv: Sequence[str] | None = None) -> None:
    """CLI entry point.

    Args:
        argv: Command-line arguments. Defaults to ``sys.argv[1:]``.

    Raises:
        SystemExit: Always raised with the appropriate exit code
            (0 = success, 1 = validation error, 2 = runtime failure).
    """
    parser = _build_parser()
    args = parser.parse_args(argv)

    if not hasattr(args, "func"):
        parser.print_help()
        raise SystemExit(EXIT_RUNTIME)

    _configure_logging(verbose=args.verbose)
    try:
        code = args.func(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        code = EXIT_VALIDATION
    except PipelineError as exc:
        print(f"error [{exc.stage}]: {exc}", file=sys.stderr)
        code = EXIT_RUNTIME
    except Exception as exc:  # noqa: BLE001
        logger.debug("Unhandled failure", exc_info=True)
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        code = EXIT_RUNTIME
    raise SystemExit(code)


def _configure_logging(*, verbose: bool) -> None:
    handler = RichHandler(console=Console(stderr=True), show_path=False)
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.WARNING,
        format="%(message)s",
        handlers=[handler],
        force=True,
    )


def _common_options() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--config",
        type=Path,
        default=None,
        help="Path to hatebench.toml",
    )
    common.add_argument(
        "--seed",
        type=int,
        default=None,
        help="Override the configured seed",
    )
    common.add_argument("--backend", default=None, help="Embedding backend id to use")
    common.add_argument(
        "--jobs",
        type=int,
        default=1,
        help="Parallel worker processes (default: 1)",
    )
    common.add_argument(
        "--force",
        action="store_true",
        help="Replace existing run directories",
    )
    common.add_argument(
        "--verbose",
        "-v",
        action="store_true",
        help="Log debug messages",
    )
    return common


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hatebench",
        description="Run multilingual hate speech classification experiments.",
    )
    parser.set_defaults(verbose=False)
    common = _common_options()
    sub = parser.add_subparsers()

    ingest_p = sub.add_parser(
        "ingest",
        parents=[common],
        help="Build canonical corpus files",
    )
    ingest_p.add_argument(
        "languages",
        nargs="*",
        help="Languages to ingest (default: all declared)",
    )
    ingest_p.set_defaults(func=_cmd_ingest)

    run_p = sub.add_parser(
        "run",
        parents=[common],
        help="Train and evaluate a scenario",
    )
    run_p.add_argument("scenario", type=Path, nargs="?", help="Scenario TOML file")
    run_p.add_argument(
        "--kind",
        choices=SCENARIO_KINDS,
        default=None,
        help="Scenario kind",
    )
    run_p.add_argument(
        "--model",
        default=None,
        help=f"Model family ({', '.join(FAMILIES)})",
    )
    run_p.add_argument(
        "--languages",
        nargs="+",
        default=None,
        help="Languages to train on",
    )
    run_p.add_argument(
        "--family",
        default=None,
        help="Language family of a language_family run",
    )
    run_p.add_argument(
        "--test-ratio",
        type=float,
        default=None,
        help="Held-out fraction per class",
    )
    run_p.add_argument(
        "--cap",
        type=int,
        default=None,
        help="Cap training records per language",
    )
    run_p.add_argument(
        "--class-weights",
        action="store_true",
        help="Weight the loss by inverse class frequency",
    )
    run_p.set_defaults(func=_cmd_run)

    report_p = sub.add_parser("report", parents=[common], help="Compare finished runs")
    report_p.add_argument(
        "--run-id",
        action="append",
        default=[],
        dest="run_ids",
        help="Run or scenario id to include (repeatable; default: all runs)",
    )
    report_p.add_argument(
        "--kind",
        choices=SCENARIO_KINDS,
        default=None,
        help="Filter by scenario kind",
    )
    report_p.add_argument("--model", default=None, help="Filter by model family")
    report_p.add_argument(
        "--axis",
        choices=["scenario", "model"],
        default="scenario",
        help="Columns: scenarios per model (default) or models per scenario",
    )
    report_p.add_argument(
        "--format",
        choices=["table", *FORMATTERS],
        default="table",
        help="Output format (default: table)",
    )
    report_p.add_argument(
        "--output",
        type=Path,
        default=None,
        help="Write the report to a file",
    )
    report_p.set_defaults(func=_cmd_report)

    stats_p = sub.add_parser("stats", parents=[common], help="Show corpus statistics")
    stats_p.add_argument(
        "languages",
        nargs="*",
        help="Languages to show (default: all built)",
    )
    stats_p.set_defaults(func=_cmd_stats)

    toy_p = sub.add_parser("toy", parents=[common], help="Write offline toy datasets")
    toy_p.add_argument("directory", type=Path, help="Directory to write into")
    toy_p.add_argument(
        "--records",
        type=int,
        default=100,
        help="Records per language (default: 100)",
    )
    toy_p.set_defaults(func=_cmd_toy)

    return parser


def _load_config(args: argparse.Namespace) -> FrameworkConfig:
    config = FrameworkConfig.load(args.config)
    if args.seed is not None:
        config = replace(config, seed=args.seed)
    return config


def _cmd_ingest(args: argparse.Namespace) -> int:
    config = _load_config(args)
    print_ingested(ingest(config, args.languages or None))
    return EXIT_OK


def _scenario_plan(args: argparse.Namespace) -> ScenarioPlan:
    if args.scenario is not None:
        plan = load_scenario(args.scenario)
    elif args.kind is not None:
        plan = ScenarioPlan(
            kind=args.kind,
            model_family=args.model or "linear_head",
            family_name=args.family,
        )
    else:
        msg = "give a scenario file or --kind"
        raise PreconditionError(msg)

    overrides = dict(plan.train_overrides)
    if args.class_weights:
        overrides["class_weights"] = True
    return replace(
        plan.with_overrides(
            model_family=args.model,
            languages=tuple(args.languages) if args.languages else None,
            family_name=args.family,
            seed=args.seed,
            test_ratio=args.test_ratio,
            cap_per_language=args.cap,
        ),
        train_overrides=overrides,
    )


def _cmd_run(args: argparse.Namespace) -> int:
    if args.jobs < 1:
        msg = f"--jobs must be at least 1, got {args.jobs}"
        raise PreconditionError(msg)
    config = _load_config(args)
    plan = _scenario_plan(args)
    context = RunContext(
        config=config,
        backend_id=args.backend,
        force=args.force,
        jobs=args.jobs,
    )
    print_outcome(run_scenario(plan, context))
    return EXIT_OK


def _cmd_report(args: argparse.Namespace) -> int:
    config = _load_config(args)
    manifests = find_manifests(
        config.runs_dir,
        args.run_ids,
        kind=args.kind,
        model=args.model,
    )
    if not manifests:
        msg = f"no runs match under {config.runs_dir}"
        raise PreconditionError(msg)
    report = render_report(manifests, scenario_axis=args.axis)

    if args.format == "table":
        print_report(report)
        return EXIT_OK
    text = get_formatter(args.format).format(report)
    if args.output is not None:
        args.output.write_text(text, encoding="utf-8", newline="\n")
        console.print(f"Wrote {args.output}")
    else:
        print(text, end="")
    return EXIT_OK


def _cmd_stats(args: argparse.Namespace) -> int:
    config = _load_config(args)
    languages = args.languages or config.corpus_languages()
    if not languages:
        msg = f"no corpus files under {config.corpus_dir}; run `hatebench ingest` first"
        raise PreconditionError(msg)
    missing = [lang for lang in languages if not config.corpus_path(lang).is_file()]
    if missing:
        msg = f"no corpus for {', '.join(missing)}; run `hatebench ingest` first"
        raise PreconditionError(msg)
    stats = []
    for language in languages:
        sidecar = config.stats_path(language)
        if sidecar.is_file():
            stats.append(read_stats(sidecar))
        else:
            stats.append(compute_stats(read_corpus(config.corpus_path(language))))
    print_stats(stats)
    return EXIT_OK


def _cmd_toy(args: argparse.Namespace) -> int:
    workspace = write_toy_workspace(
        args.directory,
        n_records=args.records,
        seed=7 if args.seed is None else args.seed,
    )
    console.print(f"Wrote toy datasets to {workspace.root}")
    console.print(f"  config: {workspace.config}")
    for scenario in workspace.scenarios:
        console.print(f"  scenario: {scenario}")
    return EXIT_OK

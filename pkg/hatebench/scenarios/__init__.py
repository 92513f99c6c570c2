from __future__ import annotations

from hatebench.scenarios.manifest import (
    MANIFEST_NAME,
    LanguageResult,
    RunManifest,
    compute_run_id,
    read_manifest,
    write_manifest,
)
from hatebench.scenarios.runner import (
    LanguageData,
    RunContext,
    ScenarioOutcome,
    check_leakage,
    default_backend_id,
    execute_spec,
    load_splits,
    run_family,
    run_monolingual,
    run_multilingual,
    run_scenario,
    training_set,
)
from hatebench.scenarios.spec import (
    BUILTIN_FAMILIES,
    SCENARIO_KINDS,
    FamilyRegistry,
    ScenarioPlan,
    ScenarioSpec,
    load_scenario,
    plan_from_mapping,
)
from hatebench.scenarios.split import (
    optional_language_cap,
    split_corpus,
    stratified_split,
)

__all__ = [
    "BUILTIN_FAMILIES",
    "MANIFEST_NAME",
    "SCENARIO_KINDS",
    "FamilyRegistry",
    "LanguageData",
    "LanguageResult",
    "RunContext",
    "RunManifest",
    "ScenarioOutcome",
    "ScenarioPlan",
    "ScenarioSpec",
    "check_leakage",
    "compute_run_id",
    "default_backend_id",
    "execute_spec",
    "load_scenario",
    "load_splits",
    "optional_language_cap",
    "plan_from_mapping",
    "read_manifest",
    "run_family",
    "run_monolingual",
    "run_multilingual",
    "run_scenario",
    "split_corpus",
    "stratified_split",
    "training_set",
    "write_manifest",
]

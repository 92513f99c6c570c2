from __future__ import annotations

import os
import sys
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import TYPE_CHECKING, Any

from hatebench.corpus.rules import RULE_KINDS, TIE_POLICIES, LabelMappingRule
from hatebench.errors import ValidationError
from hatebench.record import SUPPORTED_LANGUAGES

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

if TYPE_CHECKING:
    from collections.abc import Mapping

CONFIG_FILENAME = "hatebench.toml"
ENV_PREFIX = "HATEBENCH_"
BACKEND_KINDS = ("sentence", "token", "raw_tokens")


class ConfigError(ValidationError):
    """Raised when configuration is invalid."""


@dataclass(frozen=True)
class SourceManifest:
    """One raw dataset declared in the configuration.

    Attributes:
        source_id: Dataset identifier.
        language: Language code of every row.
        path: Raw file (CSV, TSV or JSON Lines).
        rule: Label mapping rule of the dataset.
        text_column: Column holding the post text.
        id_column: Column holding post ids; when set and the file has no
            text column, texts are fetched through the lookup client.
        format: Explicit file format, otherwise inferred from the suffix.
    """

    source_id: str
    language: str
    path: Path
    rule: LabelMappingRule
    text_column: str = "text"
    id_column: str | None = None
    format: str | None = None


@dataclass(frozen=True)
class BackendDecl:
    """Declaration of an embedding backend.

    Attributes:
        backend_id: Name used to select the backend.
        kind: ``sentence``, ``token`` or ``raw_tokens``.
        model_path: ``"mock"`` or a path to downloaded model files.
        dim: Vector dimension (not used by ``raw_tokens``).
        seed: Seed of mock backends.
        pooling: Mock sentence pooling, ``"tokens"`` or ``"text"``.
        vocabulary: Word list of mock token backends.
    """

    backend_id: str
    kind: str
    model_path: str = "mock"
    dim: int | None = None
    seed: int = 0
    pooling: str = "tokens"
    vocabulary: Path | None = None

    @property
    def is_mock(self) -> bool:
        return self.model_path == "mock"


@dataclass(frozen=True)
class FetchSettings:
    fixture: Path | None = None
    batch_size: int = 100
    max_retries: int = 3


@dataclass(frozen=True)
class FrameworkConfig:
    """Framework configuration loaded from ``hatebench.toml``.

    Attributes:
        root: Directory relative paths are resolved against.
        seed: Default seed of splits and training.
        test_ratio: Default fraction of each class held out for testing.
        corpus_dir: Directory of canonical corpus files.
        runs_dir: Directory of run artifacts.
        stopword_dir: Directory of ``<lang>.txt`` stopword lists; ``None``
            selects the packaged lists.
        embedding_cache_dir: Embedding cache directory; ``None`` disables it.
        languages: Extra user-registered language codes.
        families: Family name to member codes, added to the built-ins.
        backends: Declared embedding backends.
        sources: Declared raw datasets.
        fetch: Lookup client settings for id-only datasets.
    """

    root: Path = field(default_factory=Path.cwd)
    seed: int = 13
    test_ratio: float = 0.2
    corpus_dir: Path = Path("corpus")
    runs_dir: Path = Path("runs")
    stopword_dir: Path | None = None
    embedding_cache_dir: Path | None = None
    languages: tuple[str, ...] = ()
    families: tuple[tuple[str, tuple[str, ...]], ...] = ()
    backends: tuple[BackendDecl, ...] = ()
    sources: tuple[SourceManifest, ...] = ()
    fetch: FetchSettings = FetchSettings()

    @staticmethod
    def load(
        path: Path | None = None,
        env: Mapping[str, str] | None = None,
    ) -> FrameworkConfig:
        """Load config from *path*, or from the nearest ``hatebench.toml``.

        Searches the current directory and its parents when *path* is not
        given; without a file the defaults apply. ``HATEBENCH_<KEY>``
        environment variables override scalar keys afterwards.

        Raises:
            ConfigError: If the TOML file is missing, invalid or contains
                bad values.
        """
        environ = os.environ if env is None else env
        toml_path = path if path is not None else _find_config()
        if toml_path is None:
            config = _resolve(FrameworkConfig(root=Path.cwd().resolve()))
            return _apply_env(config, environ)

        try:
            data = tomllib.loads(toml_path.read_bytes().decode())
        except (OSError, UnicodeDecodeError, tomllib.TOMLDecodeError) as exc:
            msg = f"Failed to read {toml_path}: {exc}"
            raise ConfigError(msg) from exc

        config = _build_config(data, toml_path.resolve().parent)
        return _apply_env(config, environ)

    @property
    def registered_languages(self) -> frozenset[str]:
        return SUPPORTED_LANGUAGES | frozenset(self.languages)

    def corpus_path(self, language: str) -> Path:
        return self.corpus_dir / f"{language}.jsonl"

    def stats_path(self, language: str) -> Path:
        return self.corpus_dir / f"{language}.stats.json"

    def sources_for(self, language: str) -> tuple[SourceManifest, ...]:
        return tuple(s for s in self.sources if s.language == language)

    def corpus_languages(self) -> list[str]:
        """Languages with a corpus file under ``corpus_dir``, sorted."""
        if not self.corpus_dir.is_dir():
            return []
        return sorted(
            p.name.removesuffix(".jsonl") for p in self.corpus_dir.glob("*.jsonl")
        )


def _find_config() -> Path | None:
    """Walk up from cwd looking for hatebench.toml."""
    current = Path.cwd().resolve()
    for directory in (current, *current.parents):
        candidate = directory / CONFIG_FILENAME
        if candidate.is_file():
            return candidate
    return None


def _resolve(config: FrameworkConfig) -> FrameworkConfig:
    def absolute(p: Path | None) -> Path | None:
        if p is None:
            return None
        return p if p.is_absolute() else config.root / p

    return replace(
        config,
        corpus_dir=absolute(config.corpus_dir) or config.root,
        runs_dir=absolute(config.runs_dir) or config.root,
        stopword_dir=absolute(config.stopword_dir),
        embedding_cache_dir=absolute(config.embedding_cache_dir),
    )


def _build_config(data: dict[str, Any], root: Path) -> FrameworkConfig:
    """Construct a FrameworkConfig from a parsed ``hatebench.toml``."""
    kwargs: dict[str, Any] = {"root": root}

    if "seed" in data:
        kwargs["seed"] = _validate_int(data["seed"], "seed")
    if "test_ratio" in data:
        kwargs["test_ratio"] = _validate_ratio(data["test_ratio"], "test_ratio")
    for key in ("corpus_dir", "runs_dir", "stopword_dir", "embedding_cache_dir"):
        if key in data:
            kwargs[key] = Path(_validate_str(data[key], key))
    if "languages" in data:
        kwargs["languages"] = _validate_str_list(data["languages"], "languages")
    if "families" in data:
        kwargs["families"] = _validate_families(data["families"])
    if "backends" in data:
        kwargs["backends"] = _validate_backends(data["backends"], root)
    if "fetch" in data:
        kwargs["fetch"] = _validate_fetch(data["fetch"], root)

    config = _resolve(FrameworkConfig(**kwargs))
    if "sources" in data:
        config = replace(
            config,
            sources=_validate_sources(
                data["sources"],
                root,
                config.registered_languages,
            ),
        )
    return config


def _apply_env(config: FrameworkConfig, env: Mapping[str, str]) -> FrameworkConfig:
    """Apply ``HATEBENCH_<KEY>`` overrides of scalar keys."""
    updates: dict[str, Any] = {}
    if f"{ENV_PREFIX}SEED" in env:
        raw = env[f"{ENV_PREFIX}SEED"]
        try:
            updates["seed"] = int(raw)
        except ValueError as exc:
            msg = f"{ENV_PREFIX}SEED must be an integer, got {raw!r}"
            raise ConfigError(msg) from exc
    if f"{ENV_PREFIX}TEST_RATIO" in env:
        raw = env[f"{ENV_PREFIX}TEST_RATIO"]
        try:
            updates["test_ratio"] = _validate_ratio(float(raw), "test_ratio")
        except ValueError as exc:
            msg = f"{ENV_PREFIX}TEST_RATIO must be a number, got {raw!r}"
            raise ConfigError(msg) from exc
    for key in ("corpus_dir", "runs_dir", "stopword_dir", "embedding_cache_dir"):
        name = f"{ENV_PREFIX}{key.upper()}"
        if name in env:
            updates[key] = Path(env[name]).resolve()
    return replace(config, **updates) if updates else config


def _validate_str(value: object, name: str) -> str:
    if not isinstance(value, str) or not value:
        msg = f"{name} must be a non-empty string"
        raise ConfigError(msg)
    return value


def _validate_int(value: object, name: str) -> int:
    if not isinstance(value, int) or isinstance(value, bool):
        msg = f"{name} must be an integer"
        raise ConfigError(msg)
    return value


def _validate_ratio(value: object, name: str) -> float:
    if not isinstance(value, (int, float)) or isinstance(value, bool):
        msg = f"{name} must be a number"
        raise ConfigError(msg)
    if not 0 < float(value) < 1:
        msg = f"{name} must lie strictly between 0 and 1"
        raise ConfigError(msg)
    return float(value)


def _validate_str_list(value: object, name: str) -> tuple[str, ...]:
    """Return *value* as a tuple of strings, or raise `ConfigError`."""
    if not isinstance(value, list) or not all(isinstance(v, str) for v in value):
        msg = f"{name} must be a list of strings"
        raise ConfigError(msg)
    return tuple(value)


def _validate_families(value: object) -> tuple[tuple[str, tuple[str, ...]], ...]:
    if not isinstance(value, dict):
        msg = "families must be a table"
        raise ConfigError(msg)
    result: list[tuple[str, tuple[str, ...]]] = []
    for name, members in value.items():
        codes = _validate_str_list(members, f"families.{name}")
        if not codes:
            msg = f"families.{name} must not be empty"
            raise ConfigError(msg)
        result.append((name, codes))
    return tuple(result)


def _validate_backends(value: object, root: Path) -> tuple[BackendDecl, ...]:
    if not isinstance(value, list):
        msg = "backends must be an array of tables"
        raise ConfigError(msg)
    result: list[BackendDecl] = []
    for i, entry in enumerate(value):
        where = f"backends[{i}]"
        if not isinstance(entry, dict):
            msg = f"{where} must be a table"
            raise ConfigError(msg)
        kind = _validate_str(entry.get("kind"), f"{where}.kind")
        if kind not in BACKEND_KINDS:
            msg = f"{where}.kind must be one of {', '.join(BACKEND_KINDS)}"
            raise ConfigError(msg)
        dim = entry.get("dim")
        if dim is not None and (_validate_int(dim, f"{where}.dim") < 1):
            msg = f"{where}.dim must be positive"
            raise ConfigError(msg)
        model_path = _validate_str(
            entry.get("model_path", "mock"),
            f"{where}.model_path",
        )
        if model_path != "mock" and not Path(model_path).is_absolute():
            model_path = str(root / model_path)
        vocabulary = entry.get("vocabulary")
        result.append(
            BackendDecl(
                backend_id=_validate_str(
                    entry.get("backend_id"),
                    f"{where}.backend_id",
                ),
                kind=kind,
                model_path=model_path,
                dim=dim,
                seed=_validate_int(entry.get("seed", 0), f"{where}.seed"),
                pooling=_validate_str(
                    entry.get("pooling", "tokens"),
                    f"{where}.pooling",
                ),
                vocabulary=(
                    root / _validate_str(vocabulary, f"{where}.vocabulary")
                    if vocabulary is not None
                    else None
                ),
            )
        )
    return tuple(result)


def _validate_fetch(value: object, root: Path) -> FetchSettings:
    if not isinstance(value, dict):
        msg = "fetch must be a table"
        raise ConfigError(msg)
    fixture = value.get("fixture")
    return FetchSettings(
        fixture=root / _validate_str(fixture, "fetch.fixture") if fixture else None,
        batch_size=_validate_int(value.get("batch_size", 100), "fetch.batch_size"),
        max_retries=_validate_int(value.get("max_retries", 3), "fetch.max_retries"),
    )


def _validate_rule(value: object, source_id: str, where: str) -> LabelMappingRule:
    if not isinstance(value, dict):
        msg = f"{where}.rule must be a table"
        raise ConfigError(msg)
    kind = _validate_str(value.get("kind"), f"{where}.rule.kind")
    if kind not in RULE_KINDS:
        msg = f"{where}.rule.kind must be one of {', '.join(RULE_KINDS)}"
        raise ConfigError(msg)
    tie = value.get("tie_policy", "to_zero")
    if tie not in TIE_POLICIES:
        msg = f"{where}.rule.tie_policy must be one of {', '.join(TIE_POLICIES)}"
        raise ConfigError(msg)

    def values(key: str) -> frozenset[str]:
        return frozenset(_validate_str_list(value.get(key, []), f"{where}.rule.{key}"))

    try:
        return LabelMappingRule(
            source_id=source_id,
            kind=kind,
            columns=_validate_str_list(
                value.get("columns", ["label"]),
                f"{where}.rule.columns",
            ),
            positive_values=values("positive_values"),
            negative_values=values("negative_values"),
            reject_values=values("reject_values"),
            tie_policy=tie,
            separator=str(value.get("separator", "_")),
        )
    except ValidationError as exc:
        msg = f"{where}.rule: {exc}"
        raise ConfigError(msg) from exc


def _validate_sources(
    value: object,
    root: Path,
    languages: frozenset[str],
) -> tuple[SourceManifest, ...]:
    if not isinstance(value, list):
        msg = "sources must be an array of tables"
        raise ConfigError(msg)
    result: list[SourceManifest] = []
    seen: set[str] = set()
    for i, entry in enumerate(value):
        where = f"sources[{i}]"
        if not isinstance(entry, dict):
            msg = f"{where} must be a table"
            raise ConfigError(msg)
        source_id = _validate_str(entry.get("source_id"), f"{where}.source_id")
        if source_id in seen:
            msg = f"{where}.source_id {source_id!r} is declared twice"
            raise ConfigError(msg)
        seen.add(source_id)
        language = _validate_str(entry.get("language"), f"{where}.language")
        if language not in languages:
            msg = (
                f"{where}.language {language!r} is not registered (add it to "
                "languages)"
            )
            raise ConfigError(msg)
        id_column = entry.get("id_column")
        fmt = entry.get("format")
        result.append(
            SourceManifest(
                source_id=source_id,
                language=language,
                path=root / _validate_str(entry.get("path"), f"{where}.path"),
                rule=_validate_rule(entry.get("rule"), source_id, where),
                text_column=_validate_str(
                    entry.get("text_column", "text"),
                    f"{where}.text_column",
                ),
                id_column=(
                    _validate_str(id_column, f"{where}.id_column")
                    if id_column
                    else None
                ),
                format=_validate_str(fmt, f"{where}.format") if fmt else None,
            )
        )
    return tuple(result)

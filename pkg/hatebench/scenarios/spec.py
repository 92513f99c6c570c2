from __future__ import annotations

import sys
from dataclasses import dataclass, field, replace
from typing import TYPE_CHECKING, Any, Literal

from hatebench.config import ConfigError
from hatebench.errors import PreconditionError, RegistryError, ValidationError
from hatebench.models import FAMILIES, TrainConfig, get_family

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

if TYPE_CHECKING:
    from collections.abc import Iterable, Mapping
    from pathlib import Path

    from hatebench.config import FrameworkConfig

ScenarioKind = Literal["monolingual", "multilingual", "language_family"]
SCENARIO_KINDS: tuple[ScenarioKind, ...] = (
    "monolingual",
    "multilingual",
    "language_family",
)

BUILTIN_FAMILIES: dict[str, frozenset[str]] = {
    "germanic": frozenset({"en", "de", "da"}),
    "romance": frozenset({"fr", "es", "it", "pt"}),
}


class FamilyRegistry:
    """Named sets of related languages trained jointly."""

    def __init__(self, families: Mapping[str, Iterable[str]] | None = None) -> None:
        self._families: dict[str, frozenset[str]] = dict(BUILTIN_FAMILIES)
        for name, members in (families or {}).items():
            self.register(name, members)

    @classmethod
    def from_config(cls, config: FrameworkConfig) -> FamilyRegistry:
        return cls(dict(config.families))

    def register(self, name: str, members: Iterable[str]) -> None:
        codes = frozenset(members)
        if not codes:
            msg = f"language family {name!r} must not be empty"
            raise ValidationError(msg)
        self._families[name] = codes

    def members(self, name: str) -> frozenset[str]:
        """Return the member languages of *name*.

        Raises:
            RegistryError: If no family has that name.
        """
        codes = self._families.get(name)
        if codes is None:
            raise RegistryError("language family", name, list(self._families))
        return codes

    @property
    def names(self) -> list[str]:
        return sorted(self._families)

    def __contains__(self, name: object) -> bool:
        return name in self._families


@dataclass(frozen=True)
class ScenarioSpec:
    """One training run: which languages train a model and which test it.

    Attributes:
        kind: Experiment protocol.
        train_languages: Languages whose train splits form the training set.
        test_languages: Languages evaluated separately, one result each.
        model_family: Registered model family name.
        train_config: Optimization settings.
        seed: Seed of the split, the shuffle and training.
        backend_id: Embedding backend feeding the model.
        test_ratio: Fraction of each class held out per language.
        family_name: Language family of a ``language_family`` run.
        cap_per_language: Optional per-language cap on training records.
    """

    kind: ScenarioKind
    train_languages: tuple[str, ...]
    test_languages: tuple[str, ...]
    model_family: str
    train_config: TrainConfig
    seed: int
    backend_id: str
    test_ratio: float = 0.2
    family_name: str | None = None
    cap_per_language: int | None = None

    def __post_init__(self) -> None:
        if self.kind not in SCENARIO_KINDS:
            msg = f"unknown scenario kind {self.kind!r}"
            raise ValidationError(msg)
        if not self.train_languages:
            msg = "a scenario needs at least one training language"
            raise PreconditionError(msg)
        if self.kind == "monolingual" and (
            len(self.train_languages) != 1
            or self.test_languages != self.train_languages
        ):
            msg = "a monolingual run trains and tests on exactly one language"
            raise PreconditionError(msg)
        if not set(self.test_languages) <= set(self.train_languages):
            msg = "test languages must be a subset of the training languages"
            raise PreconditionError(msg)
        if self.kind == "language_family" and self.family_name is None:
            msg = "a language_family run needs a family name"
            raise PreconditionError(msg)
        if self.cap_per_language is not None and self.cap_per_language < 1:
            msg = "cap_per_language must be at least 1"
            raise PreconditionError(msg)
        get_family(self.model_family)

    def to_json(self) -> dict[str, Any]:
        return {
            "kind": self.kind,
            "train_languages": list(self.train_languages),
            "test_languages": list(self.test_languages),
            "model_family": self.model_family,
            "train_config": self.train_config.to_json(),
            "seed": self.seed,
            "backend_id": self.backend_id,
            "test_ratio": self.test_ratio,
            "family_name": self.family_name,
            "cap_per_language": self.cap_per_language,
        }

    @staticmethod
    def from_json(data: dict[str, Any]) -> ScenarioSpec:
        return ScenarioSpec(
            kind=data["kind"],
            train_languages=tuple(data["train_languages"]),
            test_languages=tuple(data["test_languages"]),
            model_family=data["model_family"],
            train_config=TrainConfig(**data["train_config"]),
            seed=int(data["seed"]),
            backend_id=data["backend_id"],
            test_ratio=float(data["test_ratio"]),
            family_name=data.get("family_name"),
            cap_per_language=data.get("cap_per_language"),
        )


@dataclass(frozen=True)
class ScenarioPlan:
    """A scenario request as written in a scenario file or on the command line.

    A plan expands into one ScenarioSpec per model to train: one per language
    for ``monolingual`` and exactly one otherwise.
    """

    kind: ScenarioKind
    model_family: str
    languages: tuple[str, ...] = ()
    family_name: str | None = None
    backend_id: str | None = None
    seed: int | None = None
    test_ratio: float | None = None
    cap_per_language: int | None = None
    train_overrides: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.kind not in SCENARIO_KINDS:
            msg = f"kind must be one of {', '.join(SCENARIO_KINDS)}, got {self.kind!r}"
            raise ValidationError(msg)
        if self.model_family not in FAMILIES:
            raise RegistryError("model family", self.model_family, list(FAMILIES))
        if self.kind == "language_family" and self.family_name is None:
            msg = "a language_family scenario needs a family"
            raise ValidationError(msg)

    def with_overrides(self, **changes: Any) -> ScenarioPlan:
        return replace(self, **{k: v for k, v in changes.items() if v is not None})

    def resolve_languages(
        self, config: FrameworkConfig, registry: FamilyRegistry
    ) -> tuple[str, ...]:
        """Return the languages this plan trains on, sorted.

        Monolingual and multilingual plans without an explicit list use every
        language that has a built corpus.
        """
        if self.kind == "language_family":
            return tuple(sorted(registry.members(self.family_name or "")))
        languages = self.languages or tuple(config.corpus_languages())
        if not languages:
            msg = f"no languages given and no corpus files under {config.corpus_dir}"
            raise PreconditionError(msg)
        unknown = sorted(set(languages) - config.registered_languages)
        if unknown:
            msg = f"languages not registered: {', '.join(unknown)}"
            raise PreconditionError(msg)
        return tuple(sorted(set(languages)))

    def expand(
        self,
        config: FrameworkConfig,
        registry: FamilyRegistry,
        backend_id: str,
    ) -> list[ScenarioSpec]:
        """Return the ScenarioSpecs this plan runs, in language order."""
        languages = self.resolve_languages(config, registry)
        seed = config.seed if self.seed is None else self.seed
        train_config = TrainConfig.for_family(
            self.model_family, **self.train_overrides
        ).with_seed(seed)
        test_ratio = config.test_ratio if self.test_ratio is None else self.test_ratio
        common: dict[str, Any] = {
            "model_family": self.model_family,
            "train_config": train_config,
            "seed": seed,
            "backend_id": backend_id,
            "test_ratio": test_ratio,
            "cap_per_language": self.cap_per_language,
        }
        if self.kind == "monolingual":
            return [
                ScenarioSpec(
                    kind="monolingual",
                    train_languages=(lang,),
                    test_languages=(lang,),
                    **common,
                )
                for lang in languages
            ]
        return [
            ScenarioSpec(
                kind=self.kind,
                train_languages=languages,
                test_languages=languages,
                family_name=self.family_name,
                **common,
            )
        ]

    def to_json(self) -> dict[str, Any]:
        return {
            "kind": self.kind,
            "model_family": self.model_family,
            "languages": list(self.languages),
            "family_name": self.family_name,
            "backend_id": self.backend_id,
            "seed": self.seed,
            "test_ratio": self.test_ratio,
            "cap_per_language": self.cap_per_language,
            "train_overrides": dict(sorted(self.train_overrides.items())),
        }


def load_scenario(path: Path) -> ScenarioPlan:
    """Read a scenario TOML file.

    Keys: ``kind``, ``model``, ``languages`` or ``family``, ``backend``,
    ``seed``, ``test_ratio``, ``cap_per_language`` and a ``[train]`` table
    of TrainConfig overrides.

    Raises:
        ConfigError: If the file cannot be read or a value is invalid.
    """
    try:
        data = tomllib.loads(path.read_bytes().decode())
    except (OSError, UnicodeDecodeError, tomllib.TOMLDecodeError) as exc:
        msg = f"Failed to read {path}: {exc}"
        raise ConfigError(msg) from exc
    return plan_from_mapping(data, str(path))


def plan_from_mapping(data: Mapping[str, Any], where: str = "scenario") -> ScenarioPlan:
    """Build a ScenarioPlan from a parsed scenario document."""
    known = {
        "kind", "model", "languages", "family", "backend", "seed",
        "test_ratio", "cap_per_language", "train",
    }
    unknown = sorted(set(data) - known)
    if unknown:
        msg = f"{where}: unknown keys {', '.join(unknown)}"
        raise ConfigError(msg)

    def typed(key: str, kind: type | tuple[type, ...]) -> Any:
        value = data.get(key)
        wrong = not isinstance(value, kind) or isinstance(value, bool)
        if value is not None and wrong:
            msg = f"{where}: {key} has the wrong type"
            raise ConfigError(msg)
        return value

    languages = typed("languages", list) or []
    if not all(isinstance(code, str) for code in languages):
        msg = f"{where}: languages must be a list of strings"
        raise ConfigError(msg)
    train = typed("train", dict) or {}
    try:
        return ScenarioPlan(
            kind=typed("kind", str) or "monolingual",
            model_family=typed("model", str) or "linear_head",
            languages=tuple(languages),
            family_name=typed("family", str),
            backend_id=typed("backend", str),
            seed=typed("seed", int),
            test_ratio=typed("test_ratio", (int, float)),
            cap_per_language=typed("cap_per_language", int),
            train_overrides=dict(train),
        )
    except ValidationError as exc:
        msg = f"{where}: {exc}"
        raise ConfigError(msg) from exc

from __future__ import annotations

import math
from abc import ABC, abstractmethod
from dataclasses import asdict, dataclass, field, replace
from typing import TYPE_CHECKING, Any, Literal

from hatebench.errors import PreconditionError, ValidationError

if TYPE_CHECKING:
    from collections.abc import Sequence

    import torch
    from torch import nn

    from hatebench.embeddings import EmbeddingBackend, EmbeddingCache, Granularity
    from hatebench.record import Record

N_CLASSES = 2
InputText = Literal["cleaned", "raw"]

FAMILY_GRANULARITY: dict[str, Granularity] = {
    "linear_head": "sentence",
    "cnn_gru": "token",
    "contextual_finetune": "raw_tokens",
}

_DEFAULTS: dict[str, dict[str, Any]] = {
    "linear_head": {"epochs": 20, "learning_rate": 1e-3, "max_sequence_length": 0},
    "cnn_gru": {"epochs": 20, "learning_rate": 1e-4, "max_sequence_length": 64},
    "contextual_finetune": {
        "epochs": 5,
        "learning_rate": 5e-5,
        "max_sequence_length": 512,
    },
}


@dataclass(frozen=True)
class TrainConfig:
    """Optimization settings of one training run.

    Attributes:
        epochs: Passes over the training set.
        learning_rate: AdamW learning rate.
        batch_size: Examples per optimizer step.
        optimizer: Always ``"adamw"``.
        loss: Always ``"cross_entropy"``.
        max_sequence_length: Tokens kept per example (token and contextual
            families).
        seed: Seed of initialization, shuffling and dropout.
        class_weights: Weight the loss by inverse class frequency.
        weight_decay: AdamW decoupled weight decay; ``0`` disables it.
    """

    epochs: int
    learning_rate: float
    batch_size: int = 16
    optimizer: str = "adamw"
    loss: str = "cross_entropy"
    max_sequence_length: int = 0
    seed: int = 13
    class_weights: bool = False
    weight_decay: float = 0.0

    def __post_init__(self) -> None:
        if self.epochs < 1:
            msg = f"epochs must be at least 1, got {self.epochs}"
            raise ValidationError(msg)
        if self.batch_size < 1:
            msg = f"batch_size must be at least 1, got {self.batch_size}"
            raise ValidationError(msg)
        if not (self.learning_rate > 0 and math.isfinite(self.learning_rate)):
            msg = f"learning_rate must be positive, got {self.learning_rate}"
            raise ValidationError(msg)
        if self.optimizer != "adamw" or self.loss != "cross_entropy":
            msg = "only the adamw optimizer with cross_entropy loss is supported"
            raise ValidationError(msg)

    @staticmethod
    def for_family(family: str, **overrides: Any) -> TrainConfig:
        """Return the default configuration of *family* with *overrides*.

        Raises:
            ValidationError: If *family* is unknown or an override is not a
                TrainConfig field.
        """
        if family not in _DEFAULTS:
            msg = f"no training defaults for family {family!r}"
            raise ValidationError(msg)
        fields = set(TrainConfig.__dataclass_fields__)
        unknown = set(overrides) - fields
        if unknown:
            msg = f"unknown training settings: {', '.join(sorted(unknown))}"
            raise ValidationError(msg)
        return TrainConfig(**{**_DEFAULTS[family], **overrides})

    def with_seed(self, seed: int) -> TrainConfig:
        return replace(self, seed=seed)

    def to_json(self) -> dict[str, Any]:
        return asdict(self)


@dataclass(frozen=True)
class ModelSpec:
    """Architecture of a classifier.

    Attributes:
        family: ``linear_head``, ``cnn_gru`` or ``contextual_finetune``.
        input_granularity: Granularity of the backend feeding the model.
        params: Architecture parameters (dimensions, widths, dropout, ...).
        n_classes: Always 2.
    """

    family: str
    input_granularity: str
    params: dict[str, Any] = field(default_factory=dict)
    n_classes: int = N_CLASSES

    def __post_init__(self) -> None:
        expected = FAMILY_GRANULARITY.get(self.family)
        if expected is None:
            msg = f"unknown model family {self.family!r}"
            raise ValidationError(msg)
        if expected != self.input_granularity:
            msg = (
                f"{self.family} consumes {expected} input, not "
                f"{self.input_granularity}"
            )
            raise ValidationError(msg)

    def to_json(self) -> dict[str, Any]:
        return asdict(self)


@dataclass(frozen=True)
class Prediction:
    """Predicted label and class probabilities of one record."""

    label: int
    probabilities: tuple[float, float]

    def __post_init__(self) -> None:
        p0, p1 = self.probabilities
        in_range = 0.0 <= p0 <= 1.0 and 0.0 <= p1 <= 1.0
        if abs(p0 + p1 - 1.0) > 1e-6 or not in_range:  # noqa: PLR2004
            msg = f"probabilities {self.probabilities} do not form a distribution"
            raise ValueError(msg)
        if self.label != (1 if p1 > p0 else 0):
            msg = f"label {self.label} is not the argmax of {self.probabilities}"
            raise ValueError(msg)


@dataclass(frozen=True)
class EpochStats:
    epoch: int
    mean_loss: float
    train_weighted_f1: float


@dataclass
class TrainHistory:
    """Per-epoch training statistics."""

    epochs: list[EpochStats] = field(default_factory=list)

    def to_json(self) -> list[dict[str, Any]]:
        return [asdict(e) for e in self.epochs]

    @property
    def losses(self) -> list[float]:
        return [e.mean_loss for e in self.epochs]


@dataclass
class Model:
    """A classifier: its family, network and architecture description.

    ``train_config`` is set once the model has been trained; prediction
    encodes inputs with the same sequence length.
    """

    family: ModelFamily
    module: nn.Module
    spec: ModelSpec
    train_config: TrainConfig | None = None

    @property
    def trained(self) -> bool:
        return self.train_config is not None


class ModelFamily(ABC):
    """Base class for the three classifier families.

    Subclasses declare ``name`` and ``granularity`` and implement ``build``
    and ``encode``. Training and prediction are shared. ``input_text`` names
    the record text ``text_of`` returns: ``cleaned`` or ``raw``.
    """

    input_text: InputText = "cleaned"

    @property
    @abstractmethod
    def name(self) -> str: ...

    @property
    @abstractmethod
    def granularity(self) -> Granularity: ...

    @abstractmethod
    def build(self, backend: EmbeddingBackend, config: TrainConfig) -> Model:
        """Construct an untrained model fed by *backend*."""

    @abstractmethod
    def encode(
        self,
        records: Sequence[Record],
        backend: EmbeddingBackend,
        config: TrainConfig,
        cache: EmbeddingCache | None = None,
    ) -> tuple[torch.Tensor, ...]:
        """Turn *records* into the model's input tensors (batch first)."""

    def text_of(self, record: Record) -> str:
        """Return the text this family reads from *record*."""
        return record.text

    def check_backend(self, backend: EmbeddingBackend) -> None:
        if backend.granularity != self.granularity:
            msg = (
                f"{self.name} needs a {self.granularity} backend, "
                f"{backend.backend_id} is {backend.granularity}"
            )
            raise PreconditionError(msg)

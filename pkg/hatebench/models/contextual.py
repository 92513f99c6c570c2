"""Fine-tuning of a pretrained multilingual encoder with a classification head."""

from __future__ import annotations

from typing import TYPE_CHECKING, Any

from torch import nn

from hatebench.embeddings.transformer import (
    MAX_LENGTH,
    RawTokensBackend,
    load_pretrained,
)
from hatebench.errors import PreconditionError
from hatebench.models._base import N_CLASSES, Model, ModelFamily, ModelSpec

if TYPE_CHECKING:
    from collections.abc import Sequence

    import torch

    from hatebench.embeddings import EmbeddingBackend, EmbeddingCache, Granularity
    from hatebench.models._base import InputText, TrainConfig, TrainHistory
    from hatebench.record import Record


class ContextualClassifier(nn.Module):
    """Encoder plus a dropout and linear head over the first-token state."""

    def __init__(self, encoder: Any, dropout: float = 0.1) -> None:
        super().__init__()
        self.encoder = encoder
        hidden = int(encoder.config.hidden_size)
        self.dropout = nn.Dropout(dropout)
        self.head = nn.Linear(hidden, N_CLASSES)

    def forward(
        self,
        input_ids: torch.Tensor,
        attention_mask: torch.Tensor,
    ) -> torch.Tensor:
        states = self.encoder(
            input_ids=input_ids,
            attention_mask=attention_mask,
        ).last_hidden_state
        return self.head(self.dropout(states[:, 0]))


class ContextualFamily(ModelFamily):
    """All encoder weights are updated together with the head."""

    name = "contextual_finetune"
    granularity: Granularity = "raw_tokens"
    input_text: InputText = "raw"

    def text_of(self, record: Record) -> str:
        # The encoder's own tokenizer sees the uncleaned sentence.
        return record.raw_text or record.text

    def build(self, backend: EmbeddingBackend, config: TrainConfig) -> Model:
        raw = self._raw(backend)
        _, encoder = load_pretrained(raw.model_path, raw.backend_id)
        module = ContextualClassifier(encoder)
        spec = ModelSpec(
            family=self.name,
            input_granularity=self.granularity,
            params={
                "model_path": raw.model_path,
                "hidden_size": int(encoder.config.hidden_size),
                "encoder_layers": int(getattr(encoder.config, "num_hidden_layers", 0)),
                "max_sequence_length": min(
                    config.max_sequence_length or MAX_LENGTH, MAX_LENGTH
                ),
            },
        )
        return Model(family=self, module=module, spec=spec)

    def encode(
        self,
        records: Sequence[Record],
        backend: EmbeddingBackend,
        config: TrainConfig,
        cache: EmbeddingCache | None = None,  # noqa: ARG002
    ) -> tuple[torch.Tensor, ...]:
        raw = self._raw(backend)
        batch = raw.encode(
            [self.text_of(r) for r in records],
            config.max_sequence_length,
        )
        return batch["input_ids"], batch["attention_mask"]

    def _raw(self, backend: EmbeddingBackend) -> RawTokensBackend:
        self.check_backend(backend)
        if not isinstance(backend, RawTokensBackend):
            msg = f"{backend.backend_id} cannot tokenize raw text"
            raise PreconditionError(msg)
        return backend


def finetune_contextual(
    records: Sequence[Record],
    config: TrainConfig,
    backend: EmbeddingBackend,
) -> tuple[Model, TrainHistory]:
    """Build a contextual classifier on *backend* and fine-tune it on *records*."""
    from hatebench.models.training import train  # noqa: PLC0415

    family = ContextualFamily()
    model = family.build(backend, config)
    return train(model, records, backend, config)

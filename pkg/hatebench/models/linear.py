from __future__ import annotations

from typing import TYPE_CHECKING

import numpy as np
import torch
from torch import nn

from hatebench.embeddings import SENTENCE_DIM, cache_get_or_compute
from hatebench.errors import ShapeError
from hatebench.models._base import N_CLASSES, Model, ModelFamily, ModelSpec

if TYPE_CHECKING:
    from collections.abc import Sequence

    from hatebench.embeddings import EmbeddingBackend, EmbeddingCache, Granularity
    from hatebench.models._base import TrainConfig
    from hatebench.record import Record


class LinearHead(nn.Module):
    """Logistic regression in two-class form: one affine map to 2 logits."""

    def __init__(
        self,
        input_dim: int = SENTENCE_DIM,
        *,
        zero_init: bool = False,
    ) -> None:
        super().__init__()
        self.input_dim = input_dim
        self.linear = nn.Linear(input_dim, N_CLASSES)
        if zero_init:
            nn.init.zeros_(self.linear.weight)
            nn.init.zeros_(self.linear.bias)

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        if x.dim() != 2 or x.shape[-1] != self.input_dim:  # noqa: PLR2004
            raise ShapeError(f"(batch, {self.input_dim})", tuple(x.shape))
        return self.linear(x)


def build_linear_head(
    input_dim: int = SENTENCE_DIM,
    *,
    zero_init: bool = False,
    seed: int = 0,
) -> Model:
    """Build an untrained linear head over *input_dim*-d sentence vectors."""
    torch.manual_seed(seed)
    module = LinearHead(input_dim, zero_init=zero_init)
    spec = ModelSpec(
        family="linear_head",
        input_granularity="sentence",
        params={"input_dim": input_dim, "zero_init": zero_init},
    )
    return Model(family=LinearHeadFamily(), module=module, spec=spec)


class LinearHeadFamily(ModelFamily):
    """Sentence embeddings fed to a logistic regression head."""

    name = "linear_head"
    granularity: Granularity = "sentence"

    def build(self, backend: EmbeddingBackend, config: TrainConfig) -> Model:
        self.check_backend(backend)
        return build_linear_head(backend.dim or SENTENCE_DIM, seed=config.seed)

    def encode(
        self,
        records: Sequence[Record],
        backend: EmbeddingBackend,
        config: TrainConfig,  # noqa: ARG002
        cache: EmbeddingCache | None = None,
    ) -> tuple[torch.Tensor, ...]:
        self.check_backend(backend)
        vectors = np.stack(
            [cache_get_or_compute(self.text_of(r), backend, cache) for r in records]
        ).astype(np.float32)
        return (torch.from_numpy(vectors),)

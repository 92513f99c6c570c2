from __future__ import annotations

from typing import TYPE_CHECKING

import numpy as np
import torch
import torch.nn.functional as F  # noqa: N812
from torch import nn

from hatebench.embeddings import TOKEN_DIM, cache_get_or_compute
from hatebench.errors import ShapeError
from hatebench.models._base import N_CLASSES, Model, ModelFamily, ModelSpec

if TYPE_CHECKING:
    from collections.abc import Sequence

    from hatebench.embeddings import EmbeddingBackend, EmbeddingCache, Granularity
    from hatebench.models._base import TrainConfig
    from hatebench.record import Record

KERNEL_WIDTHS = (2, 3, 4)
N_FILTERS = 300
HIDDEN_SIZE = 64
DROPOUT = 0.25


class CnnGru(nn.Module):
    """Parallel 1-D convolutions over the token axis feeding a GRU.

    Each branch spans the full embedding depth with ``n_filters`` filters of
    one width and same padding; branch outputs are concatenated per time step
    before the recurrent layer. The final hidden state goes through dropout
    and an affine map to 2 logits.
    """

    def __init__(
        self,
        embedding_dim: int = TOKEN_DIM,
        n_filters: int = N_FILTERS,
        kernel_widths: tuple[int, ...] = KERNEL_WIDTHS,
        hidden_size: int = HIDDEN_SIZE,
        dropout: float = DROPOUT,
    ) -> None:
        super().__init__()
        self.embedding_dim = embedding_dim
        self.min_length = max(kernel_widths)
        self.convs = nn.ModuleList(
            nn.Conv1d(embedding_dim, n_filters, k, padding="same")
            for k in kernel_widths
        )
        self.gru = nn.GRU(
            n_filters * len(kernel_widths), hidden_size, num_layers=1, batch_first=True
        )
        self.dropout = nn.Dropout(dropout)
        self.out = nn.Linear(hidden_size, N_CLASSES)

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        if x.dim() != 3 or x.shape[-1] != self.embedding_dim:  # noqa: PLR2004
            raise ShapeError(f"(batch, tokens, {self.embedding_dim})", tuple(x.shape))
        if x.shape[1] < self.min_length:
            # Pre-pad along the token axis so the real tokens stay last.
            x = F.pad(x, (0, 0, self.min_length - x.shape[1], 0))
        channels = x.transpose(1, 2)
        features = torch.cat([F.relu(conv(channels)) for conv in self.convs], dim=1)
        _, hidden = self.gru(features.transpose(1, 2))
        return self.out(self.dropout(hidden[-1]))


def build_cnn_gru(
    embedding_dim: int = TOKEN_DIM,
    *,
    hidden_size: int = HIDDEN_SIZE,
    dropout: float = DROPOUT,
    seed: int = 0,
) -> Model:
    """Build an untrained CNN-GRU over *embedding_dim*-d token vectors."""
    torch.manual_seed(seed)
    module = CnnGru(embedding_dim, hidden_size=hidden_size, dropout=dropout)
    spec = ModelSpec(
        family="cnn_gru",
        input_granularity="token",
        params={
            "embedding_dim": embedding_dim,
            "n_filters": N_FILTERS,
            "kernel_widths": list(KERNEL_WIDTHS),
            "hidden_size": hidden_size,
            "dropout": dropout,
            "padding": "pre",
        },
    )
    return Model(family=CnnGruFamily(), module=module, spec=spec)


class CnnGruFamily(ModelFamily):
    """Aligned word embeddings fed to a CNN-GRU."""

    name = "cnn_gru"
    granularity: Granularity = "token"

    def build(self, backend: EmbeddingBackend, config: TrainConfig) -> Model:
        self.check_backend(backend)
        model = build_cnn_gru(backend.dim or TOKEN_DIM, seed=config.seed)
        model.spec.params["max_sequence_length"] = config.max_sequence_length
        return model

    def encode(
        self,
        records: Sequence[Record],
        backend: EmbeddingBackend,
        config: TrainConfig,
        cache: EmbeddingCache | None = None,
    ) -> tuple[torch.Tensor, ...]:
        """Embed, truncate and pre-pad every record to ``max_sequence_length``."""
        self.check_backend(backend)
        dim = backend.dim or TOKEN_DIM
        length = max(config.max_sequence_length, KERNEL_WIDTHS[-1])
        batch = np.zeros((len(records), length, dim), dtype=np.float32)
        for i, record in enumerate(records):
            matrix = cache_get_or_compute(self.text_of(record), backend, cache)[:length]
            batch[i, length - matrix.shape[0] :] = matrix
        return (torch.from_numpy(batch),)

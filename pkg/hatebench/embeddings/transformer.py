"""Backends that load a local ``transformers`` checkpoint."""

from __future__ import annotations

import logging
from pathlib import Path
from typing import TYPE_CHECKING, Any

import numpy as np
import torch

from hatebench.embeddings._base import SENTENCE_DIM, EmbeddingBackend
from hatebench.errors import BackendUnavailableError, PreconditionError

if TYPE_CHECKING:
    from collections.abc import Sequence

    from numpy.typing import NDArray

logger = logging.getLogger(__name__)

MAX_LENGTH = 512


def load_pretrained(model_path: str, what: str) -> tuple[Any, Any]:
    """Load a tokenizer and encoder from *model_path*.

    Raises:
        BackendUnavailableError: If ``transformers`` is missing or the
            checkpoint cannot be loaded. Never falls back silently.
    """
    if not Path(model_path).exists():
        msg = (
            f"{what}: checkpoint {model_path} not found; download it or use a "
            "mock backend"
        )
        raise BackendUnavailableError(msg)
    try:
        from transformers import AutoModel, AutoTokenizer  # noqa: PLC0415
    except ImportError as exc:
        msg = f"{what}: the transformers package is not installed"
        raise BackendUnavailableError(msg) from exc
    try:
        tokenizer = AutoTokenizer.from_pretrained(model_path)
        model = AutoModel.from_pretrained(model_path)
    except (OSError, ValueError) as exc:
        msg = f"{what}: cannot load checkpoint {model_path}: {exc}"
        raise BackendUnavailableError(msg) from exc
    return tokenizer, model


class TransformerSentenceBackend(EmbeddingBackend):
    """Sentence vectors from a local multilingual encoder, mean-pooled.

    The encoder's hidden size must equal the declared dimension.
    """

    granularity = "sentence"

    def __init__(
        self,
        backend_id: str,
        model_path: str,
        dim: int = SENTENCE_DIM,
    ) -> None:
        self.backend_id = backend_id
        self.model_path = model_path
        self.dim = dim
        self._loaded: tuple[Any, Any] | None = None

    def _load(self) -> tuple[Any, Any]:
        if self._loaded is None:
            tokenizer, model = load_pretrained(self.model_path, self.backend_id)
            hidden = int(model.config.hidden_size)
            if hidden != self.dim:
                msg = (
                    f"{self.backend_id}: encoder hidden size {hidden} != declared dim "
                    f"{self.dim}"
                )
                raise BackendUnavailableError(msg)
            model.eval()
            self._loaded = (tokenizer, model)
        return self._loaded

    @torch.no_grad()
    def _sentence(self, text: str) -> NDArray[np.float32]:
        tokenizer, model = self._load()
        batch = tokenizer(
            [text],
            truncation=True,
            max_length=MAX_LENGTH,
            return_tensors="pt",
        )
        hidden = model(**batch).last_hidden_state
        mask = batch["attention_mask"].unsqueeze(-1).to(hidden.dtype)
        pooled = (hidden * mask).sum(dim=1) / mask.sum(dim=1).clamp(min=1.0)
        return pooled[0].cpu().numpy().astype(np.float32)

    def describe(self) -> dict[str, object]:
        return {**super().describe(), "model_path": self.model_path}


class RawTokensBackend(EmbeddingBackend):
    """Passes raw sentences to the encoder's own tokenizer."""

    granularity = "raw_tokens"
    dim = None

    def __init__(
        self,
        backend_id: str,
        model_path: str,
        max_length: int = MAX_LENGTH,
    ) -> None:
        self.backend_id = backend_id
        self.model_path = model_path
        self.max_length = max_length
        self._tokenizer: Any = None

    @property
    def tokenizer(self) -> Any:
        if self._tokenizer is None:
            self._tokenizer, _ = load_pretrained(self.model_path, self.backend_id)
        return self._tokenizer

    def encode(
        self, texts: Sequence[str], max_length: int | None = None
    ) -> dict[str, torch.Tensor]:
        """Tokenize *texts*, truncating each to *max_length* tokens.

        Returns:
            ``input_ids`` and ``attention_mask`` tensors padded to the longest
            sequence.
        """
        if not texts:
            msg = "cannot tokenize an empty batch"
            raise PreconditionError(msg)
        limit = min(max_length or self.max_length, MAX_LENGTH)
        batch = self.tokenizer(
            list(texts),
            truncation=True,
            max_length=limit,
            padding="longest",
            return_tensors="pt",
        )
        return {
            "input_ids": batch["input_ids"],
            "attention_mask": batch["attention_mask"],
        }

    def describe(self) -> dict[str, object]:
        return {
            **super().describe(),
            "model_path": self.model_path,
            "max_length": self.max_length,
        }

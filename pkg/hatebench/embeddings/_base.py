from __future__ import annotations

from abc import ABC
from typing import TYPE_CHECKING, Literal

import numpy as np

from hatebench.errors import PreconditionError, ShapeError

if TYPE_CHECKING:
    from collections.abc import Sequence

    from numpy.typing import NDArray

Granularity = Literal["sentence", "token", "raw_tokens"]

SENTENCE_DIM = 1024
TOKEN_DIM = 300


class EmbeddingBackend(ABC):
    """Base class for the encoders E mapping text to vectors.

    Subclasses set ``backend_id``, ``granularity`` and ``dim`` and override
    ``_sentence`` (sentence backends) or ``_tokens`` (token backends). The
    public methods enforce the granularity and the dimension contract.
    Backends are pure: the same input always yields the same output.
    """

    backend_id: str
    granularity: Granularity
    dim: int | None

    def embed_sentence(self, text: str) -> NDArray[np.float32]:
        """Return the ``dim``-vector of *text*.

        Raises:
            PreconditionError: If this is not a sentence backend or *text*
                is empty.
        """
        if self.granularity != "sentence":
            msg = (
                f"{self.backend_id} is a {self.granularity} backend, not a sentence "
                "backend"
            )
            raise PreconditionError(msg)
        if not text:
            msg = "cannot embed empty text"
            raise PreconditionError(msg)
        vector = np.asarray(self._sentence(text), dtype=np.float32)
        self._check(vector, (self.dim,))
        return vector

    def embed_tokens(self, tokens: Sequence[str]) -> NDArray[np.float32]:
        """Return a ``len(tokens) x dim`` matrix, one row per token.

        Out-of-vocabulary tokens map to the all-zero row. Truncation and
        padding to a sequence length are left to the caller.

        Raises:
            PreconditionError: If this is not a token backend or *tokens* is
                empty.
        """
        if self.granularity != "token":
            msg = (
                f"{self.backend_id} is a {self.granularity} backend, not a token "
                "backend"
            )
            raise PreconditionError(msg)
        if not tokens:
            msg = "cannot embed an empty token list"
            raise PreconditionError(msg)
        matrix = np.asarray(self._tokens(tokens), dtype=np.float32)
        self._check(matrix, (len(tokens), self.dim))
        return matrix

    def _sentence(self, text: str) -> NDArray[np.floating]:
        raise NotImplementedError

    def _tokens(self, tokens: Sequence[str]) -> NDArray[np.floating]:
        raise NotImplementedError

    def describe(self) -> dict[str, object]:
        """Return the identity of this backend for run manifests."""
        return {
            "backend_id": self.backend_id,
            "granularity": self.granularity,
            "dim": self.dim,
        }

    @staticmethod
    def _check(array: NDArray[np.float32], shape: tuple[int | None, ...]) -> None:
        if array.shape != shape:
            raise ShapeError(shape, array.shape)
        if not np.isfinite(array).all():
            msg = "embedding contains non-finite values"
            raise ValueError(msg)

"""Deterministic offline backends built on hashed pseudorandom vectors."""

from __future__ import annotations

import hashlib
from typing import TYPE_CHECKING

import numpy as np

from hatebench.embeddings._base import SENTENCE_DIM, TOKEN_DIM, EmbeddingBackend
from hatebench.errors import PreconditionError

if TYPE_CHECKING:
    from collections.abc import Iterable, Sequence
    from pathlib import Path

    from numpy.typing import NDArray

POOLINGS = ("tokens", "text")


def mock_embed(text: str, dim: int, seed: int) -> NDArray[np.float64]:
    """Return a unit vector that is a pure function of (text, dim, seed).

    A Philox counter-based generator keyed by SHA-256 of (seed, text) draws
    ``dim`` values in [-1, 1], which are then L2-normalized.

    Raises:
        PreconditionError: If *dim* is smaller than 1.
    """
    if dim < 1:
        msg = f"dim must be at least 1, got {dim}"
        raise PreconditionError(msg)
    digest = hashlib.sha256(f"{seed}\x1f{text}".encode()).digest()
    key = int.from_bytes(digest[:16], "little")
    rng = np.random.Generator(np.random.Philox(key=key))
    vector = rng.uniform(-1.0, 1.0, dim)
    norm = float(np.linalg.norm(vector))
    if norm == 0.0:
        vector[0] = 1.0
        return vector
    return vector / norm


class MockSentenceBackend(EmbeddingBackend):
    """Sentence backend without model files.

    With ``pooling="text"`` a sentence maps to ``mock_embed(text)``. With
    ``pooling="tokens"`` the per-token mock vectors are summed and
    re-normalized, so sentences sharing keywords land near each other.
    """

    granularity = "sentence"

    def __init__(
        self,
        backend_id: str = "mock-sentence",
        dim: int = SENTENCE_DIM,
        seed: int = 0,
        pooling: str = "tokens",
    ) -> None:
        if pooling not in POOLINGS:
            msg = f"pooling must be one of {', '.join(POOLINGS)}, got {pooling!r}"
            raise PreconditionError(msg)
        self.backend_id = backend_id
        self.dim = dim
        self.seed = seed
        self.pooling = pooling

    def _sentence(self, text: str) -> NDArray[np.float64]:
        tokens = text.split()
        if self.pooling == "text" or not tokens:
            return mock_embed(text, self.dim, self.seed)
        total = np.sum([mock_embed(t, self.dim, self.seed) for t in tokens], axis=0)
        norm = float(np.linalg.norm(total))
        return total / norm if norm > 0 else mock_embed(text, self.dim, self.seed)

    def describe(self) -> dict[str, object]:
        return {
            **super().describe(),
            "mock": True,
            "seed": self.seed,
            "pooling": self.pooling,
        }


class MockTokenBackend(EmbeddingBackend):
    """Token backend with a fixed vocabulary and hashed word vectors."""

    granularity = "token"

    def __init__(
        self,
        vocabulary: Iterable[str],
        backend_id: str = "mock-token",
        dim: int = TOKEN_DIM,
        seed: int = 0,
    ) -> None:
        self.backend_id = backend_id
        self.dim = dim
        self.seed = seed
        self.vocabulary = frozenset(vocabulary)

    @classmethod
    def from_word_list(
        cls,
        path: Path,
        backend_id: str = "mock-token",
        dim: int = TOKEN_DIM,
        seed: int = 0,
    ) -> MockTokenBackend:
        words = (w.strip() for w in path.read_text(encoding="utf-8").splitlines())
        return cls({w for w in words if w}, backend_id=backend_id, dim=dim, seed=seed)

    def _tokens(self, tokens: Sequence[str]) -> NDArray[np.float64]:
        dim = self.dim or TOKEN_DIM
        rows = [
            mock_embed(t, dim, self.seed) if t in self.vocabulary else np.zeros(dim)
            for t in tokens
        ]
        return np.vstack(rows)

    def describe(self) -> dict[str, object]:
        return {
            **super().describe(),
            "mock": True,
            "seed": self.seed,
            "vocabulary_size": len(self.vocabulary),
        }

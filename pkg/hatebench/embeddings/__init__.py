from __future__ import annotations

from pathlib import Path
from typing import TYPE_CHECKING

from hatebench.embeddings._base import (
    SENTENCE_DIM,
    TOKEN_DIM,
    EmbeddingBackend,
    Granularity,
)
from hatebench.embeddings.cache import EmbeddingCache, cache_get_or_compute, cache_key
from hatebench.embeddings.mock import MockSentenceBackend, MockTokenBackend, mock_embed
from hatebench.embeddings.transformer import (
    RawTokensBackend,
    TransformerSentenceBackend,
)
from hatebench.embeddings.vectors import VectorFileBackend
from hatebench.errors import BackendUnavailableError, RegistryError

if TYPE_CHECKING:
    from hatebench.config import BackendDecl, FrameworkConfig

__all__ = [
    "BUILTIN_BACKENDS",
    "SENTENCE_DIM",
    "TOKEN_DIM",
    "EmbeddingBackend",
    "EmbeddingCache",
    "Granularity",
    "MockSentenceBackend",
    "MockTokenBackend",
    "RawTokensBackend",
    "TransformerSentenceBackend",
    "VectorFileBackend",
    "cache_get_or_compute",
    "cache_key",
    "create_backend",
    "get_backend",
    "mock_embed",
]

BUILTIN_BACKENDS: dict[str, EmbeddingBackend] = {
    "mock-sentence": MockSentenceBackend("mock-sentence", pooling="tokens"),
    "mock-sentence-text": MockSentenceBackend("mock-sentence-text", pooling="text"),
}


def create_backend(decl: BackendDecl) -> EmbeddingBackend:
    """Instantiate the backend described by *decl*.

    Model files are not touched until the first embedding call.

    Raises:
        BackendUnavailableError: If a mock token backend has no vocabulary.
    """
    if decl.kind == "sentence":
        dim = decl.dim or SENTENCE_DIM
        if decl.is_mock:
            return MockSentenceBackend(
                decl.backend_id,
                dim=dim,
                seed=decl.seed,
                pooling=decl.pooling,
            )
        return TransformerSentenceBackend(decl.backend_id, decl.model_path, dim=dim)
    if decl.kind == "token":
        dim = decl.dim or TOKEN_DIM
        if decl.is_mock:
            if decl.vocabulary is None or not decl.vocabulary.is_file():
                msg = (
                    f"{decl.backend_id}: mock token backends need a vocabulary word "
                    "list"
                )
                raise BackendUnavailableError(msg)
            return MockTokenBackend.from_word_list(
                decl.vocabulary, backend_id=decl.backend_id, dim=dim, seed=decl.seed
            )
        return VectorFileBackend(decl.backend_id, Path(decl.model_path), dim=dim)
    return RawTokensBackend(decl.backend_id, decl.model_path)


def get_backend(backend_id: str, config: FrameworkConfig) -> EmbeddingBackend:
    """Return the backend named *backend_id*, declared or built in.

    Raises:
        RegistryError: If no backend has that id.
    """
    for decl in config.backends:
        if decl.backend_id == backend_id:
            return create_backend(decl)
    builtin = BUILTIN_BACKENDS.get(backend_id)
    if builtin is None:
        known = [d.backend_id for d in config.backends] + list(BUILTIN_BACKENDS)
        raise RegistryError("backend", backend_id, known)
    return builtin

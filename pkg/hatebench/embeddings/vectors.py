from __future__ import annotations

import logging
from typing import TYPE_CHECKING

import numpy as np

from hatebench.embeddings._base import TOKEN_DIM, EmbeddingBackend
from hatebench.errors import BackendUnavailableError, ShapeError

if TYPE_CHECKING:
    from collections.abc import Sequence
    from pathlib import Path

    from numpy.typing import NDArray

logger = logging.getLogger(__name__)


class VectorFileBackend(EmbeddingBackend):
    """Aligned word vectors read from a ``.vec`` text file.

    The file starts with a ``<count> <dim>`` header followed by one
    ``<word> <v1> ... <vdim>`` line per word. Loading is deferred to the first
    lookup. Words are matched lowercased, as cleaned text is lowercase.
    """

    granularity = "token"

    def __init__(self, backend_id: str, path: Path, dim: int = TOKEN_DIM) -> None:
        self.backend_id = backend_id
        self.path = path
        self.dim = dim
        self._index: dict[str, int] | None = None
        self._matrix: NDArray[np.float32] | None = None

    def _load(self) -> tuple[dict[str, int], NDArray[np.float32]]:
        if self._index is not None and self._matrix is not None:
            return self._index, self._matrix
        if not self.path.is_file():
            msg = (
                f"{self.backend_id}: word vector file {self.path} not found; "
                "download it or select a mock token backend"
            )
            raise BackendUnavailableError(msg)

        index: dict[str, int] = {}
        rows: list[NDArray[np.float32]] = []
        with self.path.open(encoding="utf-8", errors="replace") as fh:
            header = fh.readline().split()
            if len(header) == 2 and int(header[1]) != self.dim:  # noqa: PLR2004
                raise ShapeError(self.dim, int(header[1]))
            for line in fh:
                parts = line.rstrip().split(" ")
                if len(parts) != self.dim + 1:
                    continue
                word = parts[0].lower()
                if word in index:
                    continue
                index[word] = len(rows)
                rows.append(np.asarray(parts[1:], dtype=np.float32))
        matrix = np.vstack(rows) if rows else np.zeros((0, self.dim), dtype=np.float32)
        logger.info(
            "%s: loaded %d vectors from %s",
            self.backend_id,
            len(index),
            self.path,
        )
        self._index, self._matrix = index, matrix
        return index, matrix

    def _tokens(self, tokens: Sequence[str]) -> NDArray[np.float32]:
        index, matrix = self._load()
        dim = self.dim or TOKEN_DIM
        out = np.zeros((len(tokens), dim), dtype=np.float32)
        for i, token in enumerate(tokens):
            row = index.get(token.lower())
            if row is not None:
                out[i] = matrix[row]
        return out

    def describe(self) -> dict[str, object]:
        return {**super().describe(), "model_path": str(self.path)}

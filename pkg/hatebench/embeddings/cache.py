from __future__ import annotations

import hashlib
import io
import json
import logging
import threading
from dataclasses import dataclass
from datetime import datetime, timezone
from typing import TYPE_CHECKING

import numpy as np

from hatebench.errors import PreconditionError

if TYPE_CHECKING:
    from pathlib import Path

    from numpy.typing import NDArray

    from hatebench.embeddings._base import EmbeddingBackend

logger = logging.getLogger(__name__)

STORE_NAME = "embeddings.bin"
INDEX_NAME = "index.jsonl"


def cache_key(backend_id: str, text: str) -> str:
    """Return the SHA-256 key of (backend_id, exact text bytes)."""
    digest = hashlib.sha256()
    digest.update(backend_id.encode("utf-8"))
    digest.update(b"\x00")
    digest.update(text.encode("utf-8"))
    return digest.hexdigest()


@dataclass(frozen=True)
class EmbeddingCacheEntry:
    """Location of one cached value inside the store file."""

    key: str
    offset: int
    length: int
    checksum: str
    created_at: str


class EmbeddingCache:
    """Append-only embedding store with a JSON Lines index.

    Values are appended to ``embeddings.bin`` as ``.npy`` blobs; every write
    appends an index line. Readers share the in-memory index; writes are
    serialized by a lock. An entry whose bytes no longer match its checksum
    is evicted and recomputed.
    """

    def __init__(self, directory: Path) -> None:
        self.directory = directory
        directory.mkdir(parents=True, exist_ok=True)
        self._store = directory / STORE_NAME
        self._index_path = directory / INDEX_NAME
        self._lock = threading.Lock()
        self._index: dict[str, EmbeddingCacheEntry] = self._read_index()

    def __len__(self) -> int:
        return len(self._index)

    def __contains__(self, key: object) -> bool:
        return key in self._index

    def _read_index(self) -> dict[str, EmbeddingCacheEntry]:
        index: dict[str, EmbeddingCacheEntry] = {}
        if not self._index_path.is_file():
            return index
        for line in self._index_path.read_text(encoding="utf-8").splitlines():
            try:
                data = json.loads(line)
            except json.JSONDecodeError:
                logger.warning(
                    "Skipping unreadable cache index line in %s",
                    self._index_path,
                )
                continue
            if data.get("evicted"):
                index.pop(data["key"], None)
                continue
            index[data["key"]] = EmbeddingCacheEntry(**data)
        return index

    def get(self, key: str) -> NDArray[np.float32] | None:
        """Return the cached value for *key*, or ``None`` on a miss.

        A corrupt entry is evicted and reported as a miss.
        """
        entry = self._index.get(key)
        if entry is None:
            return None
        try:
            with self._store.open("rb") as fh:
                fh.seek(entry.offset)
                blob = fh.read(entry.length)
            if hashlib.sha256(blob).hexdigest() != entry.checksum:
                msg = "checksum mismatch"
                raise ValueError(msg)
            return np.load(io.BytesIO(blob), allow_pickle=False)
        except (OSError, ValueError) as exc:
            logger.warning("Evicting corrupt cache entry %s: %s", key[:12], exc)
            self.evict(key)
            return None

    def put(self, key: str, value: NDArray[np.float32]) -> None:
        buf = io.BytesIO()
        np.save(buf, value, allow_pickle=False)
        blob = buf.getvalue()
        with self._lock:
            with self._store.open("ab") as fh:
                offset = fh.tell()
                fh.write(blob)
            entry = EmbeddingCacheEntry(
                key=key,
                offset=offset,
                length=len(blob),
                checksum=hashlib.sha256(blob).hexdigest(),
                created_at=datetime.now(timezone.utc).isoformat(),
            )
            self._append_index(entry.__dict__)
            self._index[key] = entry

    def evict(self, key: str) -> None:
        with self._lock:
            if self._index.pop(key, None) is not None:
                self._append_index({"key": key, "evicted": True})

    def _append_index(self, data: dict[str, object]) -> None:
        with self._index_path.open("a", encoding="utf-8", newline="\n") as fh:
            fh.write(json.dumps(data) + "\n")


def cache_get_or_compute(
    text: str,
    backend: EmbeddingBackend,
    cache: EmbeddingCache | None,
) -> NDArray[np.float32]:
    """Return the embedding of *text*, reading and filling *cache*.

    Sentence backends yield a vector; token backends yield the matrix of
    ``text.split()``. Without a cache the value is computed directly.
    """
    if backend.granularity == "sentence":
        def compute() -> NDArray[np.float32]:
            return backend.embed_sentence(text)
    elif backend.granularity == "token":
        def compute() -> NDArray[np.float32]:
            return backend.embed_tokens(text.split())
    else:
        msg = f"{backend.backend_id}: {backend.granularity} backends are not cached"
        raise PreconditionError(msg)

    if cache is None:
        return compute()
    key = cache_key(backend.backend_id, text)
    hit = cache.get(key)
    if hit is not None:
        return hit
    value = compute()
    cache.put(key, value)
    return value

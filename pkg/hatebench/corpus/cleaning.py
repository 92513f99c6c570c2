from __future__ import annotations

import logging
import re
from functools import lru_cache
from pathlib import Path

logger = logging.getLogger(__name__)

DEFAULT_STOPWORD_DIR = Path(__file__).resolve().parent.parent / "stopwords"

# Escaped line breaks left by scrapers, in either case, and the real characters.
_LINE_BREAK = re.compile(r"\\[rn]|[\r\n]", re.IGNORECASE)


def clean_text(text: str, language: str, stopwords: frozenset[str]) -> str:
    """Normalize *text* into the canonical cleaned form.

    Line breaks (real or escaped) become spaces, tokens holding any non-ASCII
    or non-printable character are removed (this drops emoji as well), the
    remaining tokens are lowercased and stopwords are removed.

    Args:
        text: Input text; Arabic and Hindi must already be romanized.
        language: Language code of the record (used for logging only).
        stopwords: Lowercased stopwords of *language*.

    Returns:
        Space-joined cleaned tokens; may be empty.
    """
    text = _LINE_BREAK.sub(" ", text)
    kept: list[str] = []
    for token in text.split():
        if not (token.isascii() and token.isprintable()):
            continue
        lowered = token.lower()
        if lowered in stopwords:
            continue
        kept.append(lowered)
    if not kept and text.strip():
        logger.debug("%s: record emptied by cleaning", language)
    return " ".join(kept)


def load_stopwords(language: str, directory: Path | None = None) -> frozenset[str]:
    """Load the stopword list of *language* from ``<directory>/<language>.txt``.

    Lines are stripped and lowercased; blank lines and ``#`` comments are
    ignored. A language without a list gets an empty set and a warning.
    """
    return _load_stopwords(language, (directory or DEFAULT_STOPWORD_DIR).resolve())


@lru_cache(maxsize=64)
def _load_stopwords(language: str, directory: Path) -> frozenset[str]:
    path = directory / f"{language}.txt"
    if not path.is_file():
        logger.warning(
            "No stopword list for %r in %s; skipping removal",
            language,
            directory,
        )
        return frozenset()
    words: set[str] = set()
    for line in path.read_text(encoding="utf-8").splitlines():
        word = line.strip().lower()
        if word and not word.startswith("#"):
            words.add(word)
    return frozenset(words)

"""Romanization of Arabic script (Buckwalter) and Devanagari (ITRANS)."""

from __future__ import annotations

import logging
from collections import Counter
from typing import Literal

from indic_transliteration import sanscript

from hatebench.errors import PreconditionError

logger = logging.getLogger(__name__)

Scheme = Literal["buckwalter", "itrans"]

SCHEME_BY_LANGUAGE: dict[str, Scheme] = {"ar": "buckwalter", "hi": "itrans"}

# Published Buckwalter table, plus the Persian/Urdu letters of the extended
# table, Arabic punctuation and Arabic-Indic digits.
BUCKWALTER: dict[str, str] = {
    "ء": "'",
    "آ": "|",
    "أ": ">",
    "ؤ": "&",
    "إ": "<",
    "ئ": "}",
    "ا": "A",
    "ب": "b",
    "ة": "p",
    "ت": "t",
    "ث": "v",
    "ج": "j",
    "ح": "H",
    "خ": "x",
    "د": "d",
    "ذ": "*",
    "ر": "r",
    "ز": "z",
    "س": "s",
    "ش": "$",
    "ص": "S",
    "ض": "D",
    "ط": "T",
    "ظ": "Z",
    "ع": "E",
    "غ": "g",
    "ـ": "_",
    "ف": "f",
    "ق": "q",
    "ك": "k",
    "ل": "l",
    "م": "m",
    "ن": "n",
    "ه": "h",
    "و": "w",
    "ى": "Y",
    "ي": "y",
    "ً": "F",
    "ٌ": "N",
    "ٍ": "K",
    "َ": "a",
    "ُ": "u",
    "ِ": "i",
    "ّ": "~",
    "ْ": "o",
    "ٰ": "`",
    "ٱ": "{",
    "پ": "P",
    "چ": "J",
    "ڤ": "V",
    "گ": "G",
    "،": ",",
    "؛": ";",
    "؟": "?",
    **{chr(0x0660 + d): str(d) for d in range(10)},
}

_BUCKWALTER_TABLE = str.maketrans(BUCKWALTER)

_ARABIC_RANGES = (
    (0x0600, 0x06FF),
    (0x0750, 0x077F),
    (0xFB50, 0xFDFF),
    (0xFE70, 0xFEFF),
)
_DEVANAGARI_RANGES = ((0x0900, 0x097F), (0xA8E0, 0xA8FF))


def _in_ranges(ch: str, ranges: tuple[tuple[int, int], ...]) -> bool:
    cp = ord(ch)
    return any(lo <= cp <= hi for lo, hi in ranges)


def transliterate(
    text: str,
    scheme: Scheme,
    unmapped: Counter[str] | None = None,
) -> str:
    """Romanize *text* with the Buckwalter or ITRANS scheme.

    Characters outside the source script pass through unchanged. Source-script
    characters the scheme cannot map also pass through; each occurrence is
    counted in *unmapped* so the caller can report it without aborting.

    Args:
        text: Text in Arabic script (``buckwalter``) or Devanagari (``itrans``).
        scheme: Romanization scheme.
        unmapped: Optional counter receiving unmappable characters.

    Returns:
        The romanized text; pure ASCII when every script character is mapped.

    Raises:
        PreconditionError: If *scheme* is unknown.
    """
    if scheme not in ("buckwalter", "itrans"):
        msg = f"unknown transliteration scheme {scheme!r}"
        raise PreconditionError(msg)
    if text.isascii():
        return text

    if scheme == "buckwalter":
        out = text.translate(_BUCKWALTER_TABLE)
        ranges = _ARABIC_RANGES
    else:
        out = sanscript.transliterate(text, sanscript.DEVANAGARI, sanscript.ITRANS)
        ranges = _DEVANAGARI_RANGES

    leftovers = [ch for ch in out if _in_ranges(ch, ranges)]
    if leftovers:
        if unmapped is not None:
            unmapped.update(leftovers)
        logger.debug("%d unmapped %s characters", len(leftovers), scheme)
    return out

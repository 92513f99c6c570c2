from __future__ import annotations

from hatebench.errors import RegistryError
from hatebench.formatters._base import Formatter
from hatebench.formatters.json import JsonFormatter
from hatebench.formatters.markdown import MarkdownFormatter
from hatebench.formatters.text import TextFormatter

__all__ = [
    "FORMATTERS",
    "Formatter",
    "JsonFormatter",
    "MarkdownFormatter",
    "TextFormatter",
    "get_formatter",
]

FORMATTERS: dict[str, Formatter] = {
    "markdown": MarkdownFormatter(),
    "text": TextFormatter(),
    "json": JsonFormatter(),
}


def get_formatter(name: str) -> Formatter:
    """Return a formatter by name.

    Raises:
        RegistryError: If no formatter has that name.
    """
    formatter = FORMATTERS.get(name)
    if formatter is None:
        raise RegistryError("report format", name, list(FORMATTERS))
    return formatter

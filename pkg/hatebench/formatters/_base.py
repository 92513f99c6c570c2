from __future__ import annotations

from abc import ABC, abstractmethod
from typing import TYPE_CHECKING

if TYPE_CHECKING:
    from hatebench.evaluation.report import Report

MISSING = "-"


class Formatter(ABC):
    """Base class for all report formatters.

    Subclasses must implement the ``format`` method.
    """

    @abstractmethod
    def format(self, report: Report) -> str:
        """Format a report into an output string.

        Args:
            report: Tables rendered from run manifests.

        Returns:
            A formatted string ending in a newline, ready for writing.
        """

from __future__ import annotations

import importlib
import pkgutil
from typing import TYPE_CHECKING

from hatebench.corpus.rules._base import (
    REJECT,
    RULE_KINDS,
    TIE_POLICIES,
    LabelMapper,
    LabelMappingRule,
    Verdict,
)
from hatebench.errors import PreconditionError, RegistryError

if TYPE_CHECKING:
    from hatebench.record import RawRecord

__all__ = [
    "REJECT",
    "RULE_KINDS",
    "TIE_POLICIES",
    "LabelMapper",
    "LabelMappingRule",
    "Verdict",
    "get_mapper",
    "unify_labels",
]


def _collect_mappers() -> dict[str, LabelMapper]:
    """Discover and instantiate every LabelMapper subclass in this package.

    Modules prefixed with ``_`` are skipped, mirroring how rule plugins are
    laid out.
    """
    mappers: dict[str, LabelMapper] = {}
    for info in pkgutil.iter_modules(__path__):
        if info.name.startswith("_"):
            continue
        mod = importlib.import_module(f"{__name__}.{info.name}")
        for obj in vars(mod).values():
            if (
                isinstance(obj, type)
                and issubclass(obj, LabelMapper)
                and obj is not LabelMapper
            ):
                mapper = obj()
                mappers[mapper.kind] = mapper
    return mappers


_MAPPERS = _collect_mappers()


def get_mapper(kind: str) -> LabelMapper:
    """Return the mapper for a rule *kind*.

    Raises:
        RegistryError: If *kind* is not a known rule kind.
    """
    mapper = _MAPPERS.get(kind)
    if mapper is None:
        raise RegistryError("rule kind", kind, list(_MAPPERS))
    return mapper


def unify_labels(raw: RawRecord, rule: LabelMappingRule) -> Verdict:
    """Convert the raw annotation of *raw* into ``1``, ``0`` or ``"reject"``.

    Args:
        raw: Source row to label.
        rule: Mapping rule of the row's source.

    Returns:
        ``1`` for hate speech, ``0`` for not hate speech, ``"reject"`` when
        the row is excluded from the corpus.

    Raises:
        PreconditionError: If the rule belongs to another source.
        IngestionError: If an annotation column is missing.
        RuleCoverageError: If a raw value is not covered by the rule.
    """
    if rule.source_id != raw.source_id:
        msg = f"rule for {rule.source_id!r} applied to a row of {raw.source_id!r}"
        raise PreconditionError(msg)
    return get_mapper(rule.kind).resolve(rule.cells(raw), rule)

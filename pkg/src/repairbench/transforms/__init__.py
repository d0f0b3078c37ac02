"""The eight semantics-preserving transformations.

Each transformation is split into applicability enumeration (sites) and
deterministic application. Site enumeration does all scope-dependent
analysis up front and stores what application needs in the site's
metadata, so applying a site is a pure function of the program text and
the site.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Any

from ..sourcetext import Edit, LineMap, SourceText, Span


class TransformKind(Enum):
    LOCAL_VAR_RENAME = "LocalVarRename"
    METHOD_RENAME = "MethodRename"
    PARAM_RENAME = "ParamRename"
    INSERT_LOG = "InsertLog"
    INSERT_TRY_CATCH = "InsertTryCatch"
    BOOLEAN_EXCHANGE = "BooleanExchange"
    LOOP_EXCHANGE = "LoopExchange"
    REORDER_CONDITION = "ReorderCondition"

    @property
    def is_rename(self) -> bool:
        return self in (
            TransformKind.LOCAL_VAR_RENAME,
            TransformKind.METHOD_RENAME,
            TransformKind.PARAM_RENAME,
        )

    @staticmethod
    def from_name(name: str) -> "TransformKind":
        for kind in TransformKind:
            if kind.value == name or kind.name == name:
                return kind
        raise ValueError(f"unknown transformation kind {name!r}")


@dataclass(frozen=True)
class TransformSite:
    """One applicable location for one transformation kind.

    ``site_id`` is the 1-based ordinal of the site in document order,
    unique per (program, kind). ``metadata`` carries everything the
    apply step needs beyond the program text itself.
    """

    kind: TransformKind
    anchor: Span
    site_id: int
    metadata: dict[str, Any] = field(default_factory=dict)


@dataclass(frozen=True)
class TransformResult:
    """A transformed program plus the edit script that produced it."""

    output: SourceText
    edits: tuple[Edit, ...]
    line_map: LineMap
    provenance: dict[str, Any]
    touched_buggy_line: bool | None = None

    def with_buggy_flag(self, touched: bool) -> "TransformResult":
        return replace(self, touched_buggy_line=touched)


from .sites import enumerate_sites  # noqa: E402
from .rename import rename_identifier  # noqa: E402
from .structural import insert_log_statement, insert_try_catch  # noqa: E402
from .booleans import exchange_boolean  # noqa: E402
from .loops import exchange_loop  # noqa: E402
from .conditions import reorder_condition  # noqa: E402
from .preservation import validate_preservation  # noqa: E402

APPLY_BY_KIND = {
    TransformKind.INSERT_LOG: insert_log_statement,
    TransformKind.BOOLEAN_EXCHANGE: exchange_boolean,
    TransformKind.LOOP_EXCHANGE: exchange_loop,
    TransformKind.REORDER_CONDITION: reorder_condition,
}

__all__ = [
    "TransformKind",
    "TransformSite",
    "TransformResult",
    "enumerate_sites",
    "rename_identifier",
    "insert_log_statement",
    "insert_try_catch",
    "exchange_boolean",
    "exchange_loop",
    "reorder_condition",
    "validate_preservation",
    "APPLY_BY_KIND",
]

"""Identifier renaming: local variables, parameters, and methods.

All occurrences recorded at enumeration time (declaration, uses, and for
methods every internal call site) are replaced in one edit script;
nothing else changes.
"""

from __future__ import annotations

from ..errors import ApplicabilityError, ContractViolation
from ..javalex import is_valid_identifier
from ..sourcetext import Edit, SourceText, apply_edits
from . import TransformResult, TransformSite


def rename_identifier(
    program: SourceText, site: TransformSite, new_name: str
) -> TransformResult:
    """Rename the declaration at ``site`` to ``new_name`` everywhere it binds."""
    if not site.kind.is_rename:
        raise ContractViolation(f"{site.kind.value} is not a renaming site")
    old_name = site.metadata["old_name"]
    if not is_valid_identifier(new_name):
        raise ContractViolation(f"{new_name!r} is not a valid identifier")
    if new_name == old_name:
        raise ContractViolation("new name must differ from the old name")
    visible: frozenset[str] = site.metadata["visible"]
    if new_name in visible:
        raise ApplicabilityError(
            f"renaming {old_name!r} to {new_name!r} collides with a visible name"
        )
    edits = [
        Edit(span, new_name)
        for span in site.metadata["occurrences"]
    ]
    output, line_map = apply_edits(program, edits)
    return TransformResult(
        output=output,
        edits=tuple(edits),
        line_map=line_map,
        provenance={
            "kind": site.kind.value,
            "site_id": site.site_id,
            "old_name": old_name,
            "new_name": new_name,
            "occurrence_count": len(edits),
        },
    )

"""Condition reordering: swap the operands of `==` and `!=`.

Two replacement edits exchange the operand texts in place; the operator
and all surrounding whitespace stay untouched, so applying the same site
twice restores the original text.
"""

from __future__ import annotations

from ..errors import ContractViolation
from ..sourcetext import Edit, SourceText, apply_edits
from . import TransformKind, TransformResult, TransformSite


def reorder_condition(program: SourceText, site: TransformSite) -> TransformResult:
    if site.kind != TransformKind.REORDER_CONDITION:
        raise ContractViolation(f"{site.kind.value} is not a reorder-condition site")
    left = site.metadata["left"]
    right = site.metadata["right"]
    left_text = program.slice_bytes(left.start_byte, left.end_byte)
    right_text = program.slice_bytes(right.start_byte, right.end_byte)
    edits = [Edit(left, right_text), Edit(right, left_text)]
    output, line_map = apply_edits(program, edits)
    return TransformResult(
        output=output,
        edits=tuple(edits),
        line_map=line_map,
        provenance={
            "kind": site.kind.value,
            "site_id": site.site_id,
            "operator": site.metadata["operator"],
        },
    )

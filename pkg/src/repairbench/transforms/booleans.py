"""Boolean exchange: flip a literal initializer and negate every use.

The stored value becomes the negation of the original at every program
point: the initializer flips, each assignment's right-hand side is
wrapped in `!(...)`, and each read is wrapped in `!(name)`. Reads inside
assignment right-hand sides receive both wraps, which composes correctly.
"""

from __future__ import annotations

from ..errors import ContractViolation
from ..sourcetext import Edit, SourceText, apply_edits
from . import TransformKind, TransformResult, TransformSite


def exchange_boolean(program: SourceText, site: TransformSite) -> TransformResult:
    if site.kind != TransformKind.BOOLEAN_EXCHANGE:
        raise ContractViolation(f"{site.kind.value} is not a boolean-exchange site")
    name = site.metadata["name"]
    init_span = site.metadata["init_span"]
    flipped = "false" if site.metadata["init_literal"] == "true" else "true"
    edits = [Edit(init_span, flipped)]
    for occ in site.metadata["reads"]:
        edits.append(Edit(occ, f"!({name})"))
    for rhs_start, rhs_end in site.metadata["writes"]:
        edits.append(Edit.insert(program, rhs_start, "!("))
        edits.append(Edit.insert(program, rhs_end, ")"))
    output, line_map = apply_edits(program, edits)
    return TransformResult(
        output=output,
        edits=tuple(edits),
        line_map=line_map,
        provenance={
            "kind": site.kind.value,
            "site_id": site.site_id,
            "variable": name,
            "reads_wrapped": len(site.metadata["reads"]),
            "assignments_negated": len(site.metadata["writes"]),
        },
    )

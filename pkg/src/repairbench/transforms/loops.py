"""Loop exchange: classic `for` to `while` and `while` to `for`.

The for-to-while rewrite edits only the header and the body's closing
brace, so every statement line inside the body keeps its byte-exact
content:

    for (init; cond; update) { body }
        becomes
    { init; while (cond) { body update; } }

The outer block preserves the scope of the init declaration. The
while-to-for rewrite touches the header alone: `for (; cond; ) body`.
"""

from __future__ import annotations

from ..errors import ContractViolation
from ..sourcetext import Edit, SourceText, apply_edits
from . import TransformKind, TransformResult, TransformSite


def exchange_loop(program: SourceText, site: TransformSite) -> TransformResult:
    if site.kind != TransformKind.LOOP_EXCHANGE:
        raise ContractViolation(f"{site.kind.value} is not a loop-exchange site")
    direction = site.metadata["direction"]
    if direction == "while-to-for":
        edits = [
            Edit.replace(
                program,
                site.metadata["header_start"],
                site.metadata["header_end"],
                f"for (; {site.metadata['cond_text']}; )",
            )
        ]
    else:
        edits = _for_to_while_edits(program, site)
    output, line_map = apply_edits(program, edits)
    return TransformResult(
        output=output,
        edits=tuple(edits),
        line_map=line_map,
        provenance={
            "kind": site.kind.value,
            "site_id": site.site_id,
            "direction": direction,
        },
    )


def _for_to_while_edits(program: SourceText, site: TransformSite) -> list[Edit]:
    md = site.metadata
    if md["init_is_decl"]:
        init_part = md["init_text"] + "; "
    else:
        init_part = "".join(s + "; " for s in md["init_stmts"])
    update_part = "".join(s + "; " for s in md["update_stmts"])
    cond = md["cond_text"]

    if md["body_is_block"]:
        header_repl = f"{{ {init_part}while ({cond})"
        edits = [
            Edit.replace(program, md["header_start"], md["header_end"], header_repl),
            Edit.replace(
                program,
                md["body_close_start"],
                md["body_close_end"],
                f"{update_part}}} }}",
            ),
        ]
    else:
        header_repl = f"{{ {init_part}while ({cond}) {{"
        edits = [
            Edit.replace(program, md["header_start"], md["header_end"], header_repl),
            Edit.insert(program, md["body_end"], f" {update_part}}} }}"),
        ]
    return edits

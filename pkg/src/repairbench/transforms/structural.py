"""Statement-level insertions: log statement and try-catch wrapping."""

from __future__ import annotations

from ..errors import ApplicabilityError, ContractViolation
from ..sourcetext import Edit, SourceText, apply_edits
from . import TransformKind, TransformResult, TransformSite

LOG_STATEMENT = 'System.out.println("log");'

_CATCH_VAR_CANDIDATES = ("e", "ex", "exc", "err")


def insert_log_statement(program: SourceText, site: TransformSite) -> TransformResult:
    """Insert the log call as the first statement of a method body.

    Indentation copies the statement that follows; an empty body gets the
    opening line's indentation plus one level.
    """
    if site.kind != TransformKind.INSERT_LOG:
        raise ContractViolation(f"{site.kind.value} is not an insert-log site")
    at = site.metadata["insert_at"]
    indent = _body_indent(program, at, site.anchor.end_byte)
    edit = Edit.insert(program, at, "\n" + indent + LOG_STATEMENT)
    output, line_map = apply_edits(program, [edit])
    return TransformResult(
        output=output,
        edits=(edit,),
        line_map=line_map,
        provenance={
            "kind": site.kind.value,
            "site_id": site.site_id,
            "method": site.metadata.get("method_name"),
        },
    )


def _body_indent(program: SourceText, after_brace: int, body_end: int) -> str:
    """Indentation of the first code line inside the body, if there is one."""
    line = program.line_of_byte(after_brace)
    for ln in range(line + 1, program.line_of_byte(max(body_end - 1, after_brace)) + 1):
        text = program.line_text(ln)
        stripped = text.strip()
        if stripped and stripped != "}":
            return text[: len(text) - len(text.lstrip())]
    opening = program.line_text(line)
    return opening[: len(opening) - len(opening.lstrip())] + "    "


def insert_try_catch(
    program: SourceText, site: TransformSite, rng_seed: int = 42
) -> TransformResult:
    """Wrap the statement at ``site`` as `try { stmt } catch (Exception e) {}`.

    The catch variable avoids names visible around the statement. The seed
    is recorded in provenance; site selection among applicable statements
    is the engine's job and uses the same seed.
    """
    if site.kind != TransformKind.INSERT_TRY_CATCH:
        raise ContractViolation(f"{site.kind.value} is not a try-catch site")
    visible: frozenset[str] = site.metadata.get("visible", frozenset())
    catch_var = next(
        (c for c in _CATCH_VAR_CANDIDATES if c not in visible), None
    )
    if catch_var is None:
        catch_var = "e"
        n = 2
        while f"{catch_var}{n}" in visible:
            n += 1
        catch_var = f"{catch_var}{n}"
    edits = [
        Edit.insert(program, site.anchor.start_byte, "try { "),
        Edit.insert(
            program, site.anchor.end_byte, f" }} catch (Exception {catch_var}) {{}}"
        ),
    ]
    output, line_map = apply_edits(program, edits)
    return TransformResult(
        output=output,
        edits=tuple(edits),
        line_map=line_map,
        provenance={
            "kind": site.kind.value,
            "site_id": site.site_id,
            "seed": rng_seed,
            "catch_var": catch_var,
        },
    )


def choose_random_site(
    sites: list[TransformSite], rng_seed: int
) -> TransformSite:
    """Seeded choice among applicable statements, for single-site emission."""
    import random

    if not sites:
        raise ApplicabilityError("no applicable statement for try-catch insertion")
    return random.Random(rng_seed).choice(sites)

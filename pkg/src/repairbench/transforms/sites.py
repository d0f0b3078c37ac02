"""Applicability enumeration for all eight transformation kinds.

Returns deterministic, document-ordered site lists; an empty list encodes
inapplicability. All scope-dependent analysis happens here so the apply
functions stay pure text rewrites.
"""

from __future__ import annotations

from .. import javalex
from ..javalex import Token
from ..javaparse import (
    Node,
    SyntaxTree,
    block_statements,
    for_parts,
    items_text,
    local_var_decl_info,
    loop_body,
    loop_header_paren,
    methods_of,
)
from ..scopes import (
    CTX_ENHANCED_FOR,
    CTX_FOR_INIT,
    CTX_LOCAL,
    CTX_METHOD_PARAM,
    LOCAL_VARIABLE,
    METHOD,
    PARAMETER,
    Declaration,
    ScopeTable,
)
from ..sourcetext import SourceText, Span
from . import TransformKind, TransformSite

_RENAME_CONTEXTS = {
    TransformKind.LOCAL_VAR_RENAME: (CTX_LOCAL, CTX_FOR_INIT, CTX_ENHANCED_FOR),
    TransformKind.PARAM_RENAME: (CTX_METHOD_PARAM,),
}

_COMPOUND_ASSIGN = frozenset(
    {"+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "<<=", ">>=", ">>>="}
)


def enumerate_sites(
    program: SourceText,
    tree: SyntaxTree,
    table: ScopeTable,
    kind: TransformKind,
) -> list[TransformSite]:
    """All applicable sites for ``kind``, in document order."""
    if kind.is_rename:
        return _rename_sites(program, table, kind)
    if kind == TransformKind.INSERT_LOG:
        return _insert_log_sites(tree)
    if kind == TransformKind.INSERT_TRY_CATCH:
        return _try_catch_sites(tree, table)
    if kind == TransformKind.BOOLEAN_EXCHANGE:
        return _boolean_sites(program, tree, table)
    if kind == TransformKind.LOOP_EXCHANGE:
        return _loop_sites(program, tree)
    if kind == TransformKind.REORDER_CONDITION:
        return _reorder_sites(program, tree)
    raise ValueError(f"unhandled kind {kind}")


# ----------------------------------------------------------------------
# Renames
# ----------------------------------------------------------------------


def _rename_sites(
    program: SourceText, table: ScopeTable, kind: TransformKind
) -> list[TransformSite]:
    sites: list[TransformSite] = []
    for decl in table.declarations:
        if kind == TransformKind.METHOD_RENAME:
            if decl.kind != METHOD:
                continue
        elif kind == TransformKind.LOCAL_VAR_RENAME:
            if decl.kind != LOCAL_VARIABLE or decl.context not in _RENAME_CONTEXTS[kind]:
                continue
        else:
            if decl.kind != PARAMETER or decl.context not in _RENAME_CONTEXTS[kind]:
                continue
        occurrences = table.occurrences(decl)
        sites.append(
            TransformSite(
                kind=kind,
                anchor=decl.decl_span,
                site_id=len(sites) + 1,
                metadata={
                    "old_name": decl.name,
                    "decl_kind": decl.kind,
                    "context": decl.context,
                    "type_text": decl.type_text,
                    "occurrences": tuple(occurrences),
                    "visible": table.visible_names(decl),
                },
            )
        )
    return sites


# ----------------------------------------------------------------------
# Insert log statement
# ----------------------------------------------------------------------


def _insert_log_sites(tree: SyntaxTree) -> list[TransformSite]:
    sites: list[TransformSite] = []
    for m in methods_of(tree):
        if m.body is None or m.is_ctor:
            continue
        open_brace = m.body.children[0]
        sites.append(
            TransformSite(
                kind=TransformKind.INSERT_LOG,
                anchor=m.body.span,
                site_id=len(sites) + 1,
                metadata={
                    "method_name": m.name_token.text,
                    "insert_at": open_brace.span.end_byte,
                },
            )
        )
    return sites


# ----------------------------------------------------------------------
# Insert try-catch
# ----------------------------------------------------------------------


def _try_catch_sites(tree: SyntaxTree, table: ScopeTable) -> list[TransformSite]:
    """Block-level simple statements safe to wrap in try { ... } catch.

    Excluded for compile validity: declarations of variables used later,
    plain assignments to declaration-uninitialized locals read later
    (definite-assignment would break), and anything that is itself
    control flow or an abrupt-completion statement.
    """
    decl_by_site = {
        (d.decl_span.start_byte, d.decl_span.end_byte): d for d in table.declarations
    }
    sig_tokens = [t for t in tree.tokens if not t.is_trivia]
    sites: list[TransformSite] = []
    for block in (n for n in tree.root.walk() if n.kind == "block"):
        for stmt in block_statements(block):
            if stmt.kind == "expr_stmt":
                if not _assignment_is_wrappable(stmt, table, sig_tokens):
                    continue
            elif stmt.kind == "local_var_decl":
                if _declares_later_used_variable(stmt, decl_by_site, table):
                    continue
            else:
                continue
            sites.append(
                TransformSite(
                    kind=TransformKind.INSERT_TRY_CATCH,
                    anchor=stmt.span,
                    site_id=0,  # assigned after the block walk sorts
                    metadata={"visible": _names_near(table, stmt.span)},
                )
            )
    sites.sort(key=lambda s: s.anchor.start_byte)
    return [
        TransformSite(s.kind, s.anchor, i + 1, s.metadata)
        for i, s in enumerate(sites)
    ]


def _declares_later_used_variable(
    stmt: Node,
    decl_by_site: dict[tuple[int, int], Declaration],
    table: ScopeTable,
) -> bool:
    info = local_var_decl_info(stmt)
    if info is None:
        return True  # unrecognized shape: be conservative
    for d in info.declarators:
        decl = decl_by_site.get((d.name_token.start, d.name_token.end))
        if decl is None:
            return True
        if any(o.start_byte >= stmt.span.end_byte for o in table.occurrences(decl)):
            return True
    return False


def _assignment_is_wrappable(
    stmt: Node, table: ScopeTable, sig_tokens: list[Token]
) -> bool:
    """Expression statements are wrappable unless they are a plain
    assignment whose target was declared without an initializer and is
    used again afterwards."""
    sig = stmt.significant_children()
    if len(sig) < 3:
        return True
    first, second = sig[0], sig[1]
    if (
        first.token is None
        or first.token.kind != javalex.IDENTIFIER
        or second.token is None
        or second.token.text != "="
    ):
        return True
    target = None
    for d in table.declarations:
        for occ in table.occurrences(d):
            if occ.start_byte == first.token.start and occ.end_byte == first.token.end:
                target = d
                break
        if target is not None:
            break
    if target is None or target.context != CTX_LOCAL:
        return True
    if _decl_has_initializer(target, table, sig_tokens):
        return True
    return not any(
        o.start_byte >= stmt.span.end_byte for o in table.occurrences(target)
    )


def _decl_has_initializer(
    decl: Declaration, table: ScopeTable, sig_tokens: list[Token]
) -> bool:
    for i, tok in enumerate(sig_tokens):
        if tok.start == decl.decl_span.start_byte and tok.end == decl.decl_span.end_byte:
            j = i + 1
            while j < len(sig_tokens) and sig_tokens[j].text == "[":
                while j < len(sig_tokens) and sig_tokens[j].text != "]":
                    j += 1
                j += 1
            return j < len(sig_tokens) and sig_tokens[j].text == "="
    return False


def _names_near(table: ScopeTable, span: Span) -> frozenset[str]:
    """Identifiers visible around a span, for picking a fresh catch variable."""
    names = set(table.class_level_names)
    for d in table.declarations:
        if d.scope_span.overlaps(span):
            names.add(d.name)
    for name, spans in table.free_occurrences.items():
        if any(s.overlaps(span) for s in spans):
            names.add(name)
    return frozenset(names)


# ----------------------------------------------------------------------
# Boolean exchange
# ----------------------------------------------------------------------


def _boolean_sites(
    program: SourceText, tree: SyntaxTree, table: ScopeTable
) -> list[TransformSite]:
    decl_by_site = {
        (d.decl_span.start_byte, d.decl_span.end_byte): d for d in table.declarations
    }
    sig_tokens = [t for t in tree.tokens if not t.is_trivia]
    tok_index = {t.start: i for i, t in enumerate(sig_tokens)}
    sites: list[TransformSite] = []
    for stmt in (n for n in tree.root.walk() if n.kind == "local_var_decl"):
        info = local_var_decl_info(stmt)
        if info is None or info.type_text != "boolean":
            continue
        for d in info.declarators:
            if not d.has_init or len(d.init_items) != 1:
                continue
            lit = d.init_items[0].token
            if lit is None or lit.text not in ("true", "false"):
                continue
            decl = decl_by_site.get((d.name_token.start, d.name_token.end))
            if decl is None:
                continue
            usage = _classify_boolean_usage(
                decl, table, sig_tokens, tok_index, tree, program
            )
            if usage is None:
                continue
            reads, writes = usage
            sites.append(
                TransformSite(
                    kind=TransformKind.BOOLEAN_EXCHANGE,
                    anchor=program.span(d.name_token.start, d.name_token.end),
                    site_id=len(sites) + 1,
                    metadata={
                        "name": decl.name,
                        "init_span": program.span(lit.start, lit.end),
                        "init_literal": lit.text,
                        "reads": tuple(reads),
                        "writes": tuple(writes),
                    },
                )
            )
    sites.sort(key=lambda s: s.anchor.start_byte)
    return [
        TransformSite(s.kind, s.anchor, i + 1, s.metadata)
        for i, s in enumerate(sites)
    ]


def _classify_boolean_usage(
    decl: Declaration,
    table: ScopeTable,
    sig_tokens: list[Token],
    tok_index: dict[int, int],
    tree: SyntaxTree,
    program: SourceText,
) -> tuple[list[Span], list[tuple[int, int]]] | None:
    """Split occurrences into reads and statement-form writes.

    Returns None when any occurrence cannot be handled (compound
    assignment, write outside a simple `name = expr;` statement).
    """
    reads: list[Span] = []
    writes: list[tuple[int, int]] = []  # (rhs_start, rhs_end) byte extents
    stmts = [n for n in tree.root.walk() if n.kind == "expr_stmt"]
    for occ in table.occurrences(decl):
        if occ == decl.decl_span:
            continue
        i = tok_index.get(occ.start_byte)
        if i is None:
            return None
        nxt = sig_tokens[i + 1] if i + 1 < len(sig_tokens) else None
        prev = sig_tokens[i - 1] if i > 0 else None
        if nxt is not None and (nxt.text in _COMPOUND_ASSIGN or nxt.text in ("++", "--")):
            return None
        if prev is not None and prev.text in ("++", "--"):
            return None
        if nxt is not None and nxt.text == "=":
            stmt = _enclosing(stmts, occ.start_byte)
            if stmt is None:
                return None
            sig = stmt.significant_children()
            if (
                len(sig) < 3
                or sig[0].token is None
                or sig[0].token.start != occ.start_byte
                or sig[1].token is None
                or sig[1].token.text != "="
                or sig[-1].token is None
                or sig[-1].token.text != ";"
            ):
                return None
            rhs_items = sig[2:-1]
            if not rhs_items:
                return None
            writes.append(
                (rhs_items[0].span.start_byte, rhs_items[-1].span.end_byte)
            )
        else:
            reads.append(occ)
    return reads, writes


def _enclosing(stmts: list[Node], at_byte: int) -> Node | None:
    best = None
    for s in stmts:
        if s.span.start_byte <= at_byte < s.span.end_byte:
            if best is None or (s.span.end_byte - s.span.start_byte) < (
                best.span.end_byte - best.span.start_byte
            ):
                best = s
    return best


# ----------------------------------------------------------------------
# Loop exchange
# ----------------------------------------------------------------------


def _loop_sites(program: SourceText, tree: SyntaxTree) -> list[TransformSite]:
    sites: list[TransformSite] = []
    for node in tree.root.walk():
        if node.kind == "for_stmt":
            parts = for_parts(node)
            body = loop_body(node)
            paren = loop_header_paren(node)
            if parts is None or body is None or paren is None:
                continue
            if _contains_continue(body):
                continue
            if body.kind == "block":
                last = body.children[-1]
                if last.token is None or last.token.text != "}":
                    continue
            init_decl = _init_is_declaration(parts.init_items)
            sites.append(
                TransformSite(
                    kind=TransformKind.LOOP_EXCHANGE,
                    anchor=node.span,
                    site_id=0,
                    metadata={
                        "direction": "for-to-while",
                        "header_start": node.span.start_byte,
                        "header_end": paren.span.end_byte,
                        "init_text": items_text(program, parts.init_items),
                        "init_is_decl": init_decl,
                        "cond_text": items_text(program, parts.cond_items) or "true",
                        "update_stmts": tuple(
                            _split_statement_list(program, parts.update_items)
                        ),
                        "init_stmts": tuple(
                            _split_statement_list(program, parts.init_items)
                        )
                        if not init_decl
                        else (),
                        "body_is_block": body.kind == "block",
                        "body_close_start": body.children[-1].span.start_byte
                        if body.kind == "block"
                        else None,
                        "body_close_end": body.children[-1].span.end_byte
                        if body.kind == "block"
                        else None,
                        "body_end": body.span.end_byte,
                    },
                )
            )
        elif node.kind == "while_stmt":
            paren = loop_header_paren(node)
            body = loop_body(node)
            if paren is None or body is None:
                continue
            inner = paren.significant_children()[1:-1]
            cond_text = items_text(program, inner)
            if not cond_text:
                continue
            sites.append(
                TransformSite(
                    kind=TransformKind.LOOP_EXCHANGE,
                    anchor=node.span,
                    site_id=0,
                    metadata={
                        "direction": "while-to-for",
                        "header_start": node.span.start_byte,
                        "header_end": paren.span.end_byte,
                        "cond_text": cond_text,
                    },
                )
            )
    sites.sort(key=lambda s: s.anchor.start_byte)
    return [
        TransformSite(s.kind, s.anchor, i + 1, s.metadata)
        for i, s in enumerate(sites)
    ]


def _contains_continue(body: Node) -> bool:
    for leaf in body.iter_leaves():
        tok = leaf.token
        if tok is not None and tok.kind == javalex.KEYWORD and tok.text == "continue":
            return True
    return False


def _init_is_declaration(init_items: tuple[Node, ...]) -> bool:
    from ..javaparse import _match_declaration

    return bool(init_items) and _match_declaration(list(init_items)) is not None


def _split_statement_list(
    program: SourceText, items: tuple[Node, ...]
) -> list[str]:
    """Split `i++, j--` style expression lists on top-level commas."""
    if not items:
        return []
    parts: list[list[Node]] = [[]]
    for item in items:
        if item.token is not None and item.token.text == ",":
            parts.append([])
        else:
            parts[-1].append(item)
    return [items_text(program, tuple(p)) for p in parts if p]


# ----------------------------------------------------------------------
# Reorder condition
# ----------------------------------------------------------------------

_LITERAL_KINDS = frozenset({javalex.NUMBER, javalex.STRING, javalex.CHAR})
_LITERAL_KEYWORDS = frozenset({"true", "false", "null", "this"})
_SAFE_GROUP_OPS = frozenset(
    {"+", "-", "*", "/", "%", "<", ">", "<=", ">=", "==", "!=", "&&", "||",
     "!", "~", "&", "|", "^", "<<", ">>", ">>>", "."}
)
_LEFT_BOUNDARY_TEXT = frozenset(
    {"(", "{", "[", ",", ";", "=", "&&", "||", "&", "|", "^", "?", ":",
     "==", "!=", "->"} | _COMPOUND_ASSIGN
)
_LEFT_BOUNDARY_KW = frozenset({"return", "while", "if", "assert", "case", "yield", "else", "do"})
_RIGHT_BOUNDARY_TEXT = frozenset(
    {")", "]", "}", ",", ";", "?", ":", "&&", "||", "&", "|", "^", "==", "!=", "->"}
)


def _is_primary_token(tok: Token) -> bool:
    if tok.kind == javalex.IDENTIFIER or tok.kind in _LITERAL_KINDS:
        return True
    return tok.kind == javalex.KEYWORD and tok.text in _LITERAL_KEYWORDS


def _reorder_sites(program: SourceText, tree: SyntaxTree) -> list[TransformSite]:
    sig = [t for t in tree.tokens if not t.is_trivia]
    sites: list[TransformSite] = []
    for i, tok in enumerate(sig):
        if tok.kind != javalex.OPERATOR or tok.text not in ("==", "!="):
            continue
        left = _match_left_operand(sig, i)
        right = _match_right_operand(sig, i)
        if left is None or right is None:
            continue
        lstart, lend = left
        rstart, rend = right
        sites.append(
            TransformSite(
                kind=TransformKind.REORDER_CONDITION,
                anchor=program.span(sig[lstart].start, sig[rend].end),
                site_id=len(sites) + 1,
                metadata={
                    "operator": tok.text,
                    "left": program.span(sig[lstart].start, sig[lend].end),
                    "right": program.span(sig[rstart].start, sig[rend].end),
                },
            )
        )
    return sites


def _match_left_operand(sig: list[Token], op_i: int) -> tuple[int, int] | None:
    """Indices (first, last) of a side-effect-free operand ending at op_i-1."""
    j = op_i - 1
    if j < 0:
        return None
    end = j
    if sig[j].text == ")":
        start = _match_group_back(sig, j)
        if start is None:
            return None
    elif _is_primary_token(sig[j]):
        start = j
        while (
            start - 2 >= 0
            and sig[start - 1].text == "."
            and (_is_primary_token(sig[start - 2]))
        ):
            start -= 2
    else:
        return None
    before = sig[start - 1] if start > 0 else None
    if before is not None:
        if before.text in _LEFT_BOUNDARY_TEXT:
            pass
        elif before.kind == javalex.KEYWORD and before.text in _LEFT_BOUNDARY_KW:
            pass
        else:
            return None
    return start, end


def _match_right_operand(sig: list[Token], op_i: int) -> tuple[int, int] | None:
    j = op_i + 1
    if j >= len(sig):
        return None
    start = j
    if sig[j].text == "(":
        end = _match_group_forward(sig, j)
        if end is None:
            return None
    elif _is_primary_token(sig[j]):
        end = j
        while (
            end + 2 < len(sig)
            and sig[end + 1].text == "."
            and _is_primary_token(sig[end + 2])
        ):
            end += 2
    else:
        return None
    after = sig[end + 1] if end + 1 < len(sig) else None
    if after is not None and after.text not in _RIGHT_BOUNDARY_TEXT:
        return None
    return start, end


def _match_group_back(sig: list[Token], close_i: int) -> int | None:
    """Match a parenthesized side-effect-free group ending at close_i."""
    depth = 0
    j = close_i
    while j >= 0:
        t = sig[j]
        if t.text == ")":
            depth += 1
        elif t.text == "(":
            depth -= 1
            if depth == 0:
                prev = sig[j - 1] if j > 0 else None
                if prev is not None and (
                    prev.kind == javalex.IDENTIFIER or prev.text in (")", "]")
                ):
                    return None  # call or cast application
                if not _group_tokens_safe(sig, j, close_i):
                    return None
                return j
        j -= 1
    return None


def _match_group_forward(sig: list[Token], open_i: int) -> int | None:
    depth = 0
    j = open_i
    while j < len(sig):
        t = sig[j]
        if t.text == "(":
            depth += 1
        elif t.text == ")":
            depth -= 1
            if depth == 0:
                if not _group_tokens_safe(sig, open_i, j):
                    return None
                return j
        j += 1
    return None


def _group_tokens_safe(sig: list[Token], open_i: int, close_i: int) -> bool:
    """Every token inside the group is a side-effect-free expression part."""
    for k in range(open_i + 1, close_i):
        t = sig[k]
        if t.text == "(":
            prev = sig[k - 1]
            if prev.kind == javalex.IDENTIFIER or prev.text in (")", "]"):
                return False  # method call inside
            continue
        if t.text == ")":
            continue
        if _is_primary_token(t):
            continue
        if t.text in _SAFE_GROUP_OPS:
            continue
        return False
    return True

"""Scope-aware identifier resolution over the structural tree.

Resolution is purely structural: block nesting plus declaration-before-use
ordering, with innermost-scope shadowing. There is no type resolution;
identifiers that do not bind to a local, parameter, or method declaration
(fields, types, imports) are kept as free occurrences so collision checks
stay conservative.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import javalex
from .errors import InputError
from .javaparse import (
    MethodInfo,
    Node,
    SyntaxTree,
    block_statements,
    local_var_decl_info,
    methods_of,
    params_of,
)
from .sourcetext import Span

LOCAL_VARIABLE = "local-variable"
PARAMETER = "parameter"
METHOD = "method"

# Contexts a declaration can originate from; renaming restricts on these.
CTX_LOCAL = "local"
CTX_FOR_INIT = "for-init"
CTX_ENHANCED_FOR = "enhanced-for"
CTX_CATCH_PARAM = "catch-param"
CTX_LAMBDA_PARAM = "lambda-param"
CTX_METHOD_PARAM = "method-param"
CTX_METHOD = "method"


@dataclass(frozen=True)
class Declaration:
    name: str
    kind: str  # LOCAL_VARIABLE, PARAMETER, or METHOD
    decl_span: Span  # the declared name token
    scope_span: Span  # region in which the name is bindable
    context: str
    type_text: str = ""


class ScopeTable:
    """Declarations plus the identifier occurrences bound to each."""

    def __init__(
        self,
        declarations: tuple[Declaration, ...],
        occurrences: dict[Declaration, tuple[Span, ...]],
        class_level_names: frozenset[str],
        free_occurrences: dict[str, tuple[Span, ...]],
    ) -> None:
        self.declarations = declarations
        self._occurrences = occurrences
        self.class_level_names = class_level_names
        self.free_occurrences = free_occurrences

    def occurrences(self, decl: Declaration) -> tuple[Span, ...]:
        try:
            return self._occurrences[decl]
        except KeyError:
            raise LookupError(f"unknown declaration {decl.name!r}") from None

    def visible_names(self, decl: Declaration) -> frozenset[str]:
        """Names that could capture or be captured by a rename of ``decl``."""
        names = set(self.class_level_names)
        for other in self.declarations:
            if other.scope_span.overlaps(decl.scope_span):
                names.add(other.name)
        for name, spans in self.free_occurrences.items():
            if any(s.overlaps(decl.scope_span) for s in spans):
                names.add(name)
        return frozenset(names)


def find_identifier_occurrences(table: ScopeTable, decl: Declaration) -> list[Span]:
    """All spans bound to ``decl``, sorted by start byte."""
    return list(table.occurrences(decl))


def resolve_scopes(tree: SyntaxTree, text=None) -> ScopeTable:
    """Bind every identifier occurrence to its innermost visible declaration.

    Rejects error-flagged trees: spans from a broken parse cannot be
    trusted for rewriting.
    """
    if tree.error:
        raise InputError("cannot resolve scopes on an error-flagged tree: "
                         + "; ".join(tree.errors[:3]))
    src = tree.text
    collector = _DeclarationCollector(tree)
    declarations = collector.collect()
    class_names = collector.class_level_names

    sig_tokens = [t for t in tree.tokens if not t.is_trivia]
    skip_spans = _import_package_spans(tree)

    by_name: dict[str, list[Declaration]] = {}
    for d in declarations:
        by_name.setdefault(d.name, []).append(d)

    occurrences: dict[Declaration, list[Span]] = {d: [] for d in declarations}
    free: dict[str, list[Span]] = {}
    decl_site: dict[tuple[int, int], Declaration] = {
        (d.decl_span.start_byte, d.decl_span.end_byte): d for d in declarations
    }

    for idx, tok in enumerate(sig_tokens):
        if tok.kind != javalex.IDENTIFIER:
            continue
        if any(s <= tok.start < e for s, e in skip_spans):
            continue
        prev = sig_tokens[idx - 1] if idx > 0 else None
        prev2 = sig_tokens[idx - 2] if idx > 1 else None
        nxt = sig_tokens[idx + 1] if idx + 1 < len(sig_tokens) else None
        if prev is not None and prev.text in ("::", "@", "new"):
            continue
        if prev is not None and prev.text == ".":
            # Member access: only `this.name` binds like an unqualified name.
            if not (prev2 is not None and prev2.text == "this"):
                continue
        own = decl_site.get((tok.start, tok.end))
        if own is not None:
            occurrences[own].append(src.span(tok.start, tok.end))
            continue
        is_call = nxt is not None and nxt.text == "("
        decl = _bind(by_name.get(tok.text, []), tok.start, is_call)
        if decl is not None:
            occurrences[decl].append(src.span(tok.start, tok.end))
        else:
            free.setdefault(tok.text, []).append(src.span(tok.start, tok.end))

    return ScopeTable(
        tuple(declarations),
        {d: tuple(sorted(spans, key=lambda s: s.start_byte))
         for d, spans in occurrences.items()},
        frozenset(class_names),
        {n: tuple(spans) for n, spans in free.items()},
    )


def _bind(candidates: list[Declaration], at_byte: int, is_call: bool) -> Declaration | None:
    """Innermost declaration whose scope contains ``at_byte``.

    Call positions bind to methods; value positions bind to locals and
    parameters. Locals only bind at or after their declaration point.
    """
    best: Declaration | None = None
    best_size = -1
    for d in candidates:
        if is_call != (d.kind == METHOD):
            continue
        s = d.scope_span
        if not (s.start_byte <= at_byte < s.end_byte):
            continue
        if d.context == CTX_LOCAL and at_byte < d.decl_span.start_byte:
            continue
        size = s.end_byte - s.start_byte
        if best is None or size < best_size or (
            size == best_size and d.decl_span.start_byte > best.decl_span.start_byte
        ):
            best = d
            best_size = size
    return best


def _import_package_spans(tree: SyntaxTree) -> list[tuple[int, int]]:
    spans = []
    for node in tree.root.children:
        if node.kind != "raw_stmt":
            continue
        sig = node.significant_children()
        if sig and sig[0].token is not None and sig[0].token.text in ("import", "package"):
            spans.append((node.span.start_byte, node.span.end_byte))
    return spans


class _DeclarationCollector:
    def __init__(self, tree: SyntaxTree) -> None:
        self.tree = tree
        self.src = tree.text
        self.decls: list[Declaration] = []
        self.class_level_names: set[str] = set()

    def collect(self) -> tuple[Declaration, ...]:
        self._collect_class_level()
        for m in methods_of(self.tree):
            self._collect_method(m)
        self._collect_lambda_params()
        self.decls.sort(key=lambda d: d.decl_span.start_byte)
        return tuple(self.decls)

    def _collect_class_level(self) -> None:
        for node in self.tree.root.walk():
            if node.kind == "type_decl":
                sig = node.significant_children()
                for i, c in enumerate(sig):
                    if (
                        c.token is not None
                        and c.token.kind == javalex.KEYWORD
                        and c.token.text in ("class", "interface", "enum", "record")
                        and i + 1 < len(sig)
                        and sig[i + 1].token is not None
                    ):
                        self.class_level_names.add(sig[i + 1].token.text)
                        break
            elif node.kind == "field_decl":
                info = local_var_decl_info(node)
                if info is not None:
                    for d in info.declarators:
                        self.class_level_names.add(d.name_token.text)

    def _enclosing_body(self, m: MethodInfo) -> Span:
        """Scope for a method name: the innermost enclosing type body, or
        the whole program for bare-method fixtures."""
        best: Node | None = None
        for node in self.tree.root.walk():
            if node.kind != "type_body":
                continue
            if (
                node.span.start_byte <= m.node.span.start_byte
                and m.node.span.end_byte <= node.span.end_byte
            ):
                if best is None or (node.span.end_byte - node.span.start_byte) < (
                    best.span.end_byte - best.span.start_byte
                ):
                    best = node
        return best.span if best is not None else self.tree.root.span

    def _collect_method(self, m: MethodInfo) -> None:
        src = self.src
        name_span = src.span(m.name_token.start, m.name_token.end)
        if not m.is_ctor:
            self.decls.append(
                Declaration(
                    m.name_token.text, METHOD, name_span,
                    self._enclosing_body(m), CTX_METHOD,
                )
            )
            self.class_level_names.add(m.name_token.text)
        else:
            self.class_level_names.add(m.name_token.text)

        scope_end = m.body.span.end_byte if m.body is not None else m.node.span.end_byte
        for p in params_of(m.params):
            self.decls.append(
                Declaration(
                    p.name_token.text, PARAMETER,
                    src.span(p.name_token.start, p.name_token.end),
                    src.span(m.params.span.start_byte, scope_end),
                    CTX_METHOD_PARAM, p.type_text,
                )
            )
        if m.body is not None:
            self._collect_block(m.body)

    def _collect_block(self, block: Node) -> None:
        for stmt in block_statements(block):
            self._collect_statement(stmt, block)

    def _collect_statement(self, stmt: Node, enclosing_block: Node) -> None:
        src = self.src
        if stmt.kind == "local_var_decl":
            info = local_var_decl_info(stmt)
            if info is not None:
                for d in info.declarators:
                    self.decls.append(
                        Declaration(
                            d.name_token.text, LOCAL_VARIABLE,
                            src.span(d.name_token.start, d.name_token.end),
                            src.span(d.name_token.start, enclosing_block.span.end_byte),
                            CTX_LOCAL, info.type_text,
                        )
                    )
            return
        if stmt.kind == "block":
            self._collect_block(stmt)
            return
        if stmt.kind in ("for_stmt", "enhanced_for_stmt"):
            self._collect_for_header(stmt)
        if stmt.kind == "try_stmt":
            self._collect_catch_params(stmt)
        # Recurse into nested statements and blocks.
        for child in stmt.children:
            if child.kind == "block":
                self._collect_block(child)
            elif child.kind in (
                "if_stmt", "for_stmt", "enhanced_for_stmt", "while_stmt",
                "do_stmt", "try_stmt", "switch_stmt", "sync_stmt",
                "labeled_stmt", "local_var_decl", "case_label",
            ):
                self._collect_statement(child, enclosing_block)

    def _collect_for_header(self, stmt: Node) -> None:
        src = self.src
        paren = next((c for c in stmt.children if c.kind == "paren"), None)
        if paren is None:
            return
        inner = paren.significant_children()[1:-1]
        if stmt.kind == "enhanced_for_stmt":
            # `Type name : expr` -- the declared name precedes the colon.
            for i, item in enumerate(inner):
                if item.token is not None and item.token.text == ":" and i > 0:
                    name = inner[i - 1]
                    if name.token is not None and name.token.kind == javalex.IDENTIFIER:
                        type_text = " ".join(
                            n.token.text if n.token is not None else "[]"
                            for n in inner[: i - 1]
                        )
                        self.decls.append(
                            Declaration(
                                name.token.text, LOCAL_VARIABLE,
                                src.span(name.token.start, name.token.end),
                                src.span(stmt.span.start_byte, stmt.span.end_byte),
                                CTX_ENHANCED_FOR, type_text,
                            )
                        )
                    break
            return
        # Classic for: init part up to the first ';'.
        init: list[Node] = []
        for item in inner:
            if item.token is not None and item.token.text == ";":
                break
            init.append(item)
        from .javaparse import _match_declaration  # shared pattern matcher

        first = _match_declaration(init)
        if first is None:
            return
        type_text = " ".join(
            n.token.text if n.token is not None else "[]" for n in init[:first]
        )
        i = first
        while i < len(init):
            name = init[i]
            if name.token is None or name.token.kind != javalex.IDENTIFIER:
                break
            self.decls.append(
                Declaration(
                    name.token.text, LOCAL_VARIABLE,
                    src.span(name.token.start, name.token.end),
                    src.span(stmt.span.start_byte, stmt.span.end_byte),
                    CTX_FOR_INIT, type_text,
                )
            )
            # Advance past this declarator's initializer to the next comma.
            depth_gap = 0
            i += 1
            while i < len(init):
                t = init[i].token
                if t is not None and t.text == "<":
                    from .javaparse import match_generic_args

                    g = match_generic_args(init, i)
                    if g is not None:
                        i = g
                        continue
                if t is not None and t.text == ",":
                    i += 1
                    break
                i += 1
        return

    def _collect_catch_params(self, stmt: Node) -> None:
        src = self.src
        children = [c for c in stmt.children if not c.is_trivia]
        for i, c in enumerate(children):
            if (
                c.token is not None
                and c.token.text == "catch"
                and i + 2 < len(children)
                and children[i + 1].kind == "paren"
                and children[i + 2].kind == "block"
            ):
                inner = children[i + 1].significant_children()[1:-1]
                if inner and inner[-1].token is not None and inner[-1].token.kind == javalex.IDENTIFIER:
                    name = inner[-1].token
                    block = children[i + 2]
                    self.decls.append(
                        Declaration(
                            name.text, LOCAL_VARIABLE,
                            src.span(name.start, name.end),
                            src.span(children[i + 1].span.start_byte, block.span.end_byte),
                            CTX_CATCH_PARAM,
                        )
                    )

    def _collect_lambda_params(self) -> None:
        """Lambda parameters, scoped to the enclosing statement.

        The over-wide scope is safe: Java forbids lambda parameters from
        shadowing visible locals, and lambda parameters are never rename
        targets here.
        """
        src = self.src
        sig = [t for t in self.tree.tokens if not t.is_trivia]
        stmts = [
            n for n in self.tree.root.walk()
            if n.kind in ("expr_stmt", "local_var_decl", "return_stmt", "field_decl")
        ]
        for idx, tok in enumerate(sig):
            if tok.text != "->" or tok.kind != javalex.OPERATOR:
                continue
            enclosing = None
            for s in stmts:
                if s.span.start_byte <= tok.start < s.span.end_byte:
                    if enclosing is None or (
                        s.span.end_byte - s.span.start_byte
                        < enclosing.span.end_byte - enclosing.span.start_byte
                    ):
                        enclosing = s
            if enclosing is None:
                continue
            names = self._lambda_param_names(sig, idx)
            for name_tok in names:
                self.decls.append(
                    Declaration(
                        name_tok.text, PARAMETER,
                        src.span(name_tok.start, name_tok.end),
                        src.span(name_tok.start, enclosing.span.end_byte),
                        CTX_LAMBDA_PARAM,
                    )
                )

    @staticmethod
    def _lambda_param_names(sig, arrow_idx):
        prev = sig[arrow_idx - 1] if arrow_idx > 0 else None
        if prev is None:
            return []
        if prev.kind == javalex.IDENTIFIER:
            return [prev]
        if prev.text == ")":
            # Walk back to the matching '(' collecting parameter names.
            depth = 0
            j = arrow_idx - 1
            names = []
            expecting_name = True  # names precede ',' or ')'
            while j >= 0:
                t = sig[j]
                if t.text == ")":
                    depth += 1
                elif t.text == "(":
                    depth -= 1
                    if depth == 0:
                        break
                elif depth == 1 and t.kind == javalex.IDENTIFIER and expecting_name:
                    names.append(t)
                    expecting_name = False
                elif depth == 1 and t.text == ",":
                    expecting_name = True
                j -= 1
            names.reverse()
            return names
        return []

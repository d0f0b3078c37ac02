"""Structural Java parser: bracket grouping plus statement-level recognition.

The tree is lossless: every token (whitespace and comments included) is a
leaf, children cover their parent's span contiguously, and concatenating
leaf spans in order reproduces the source. Structure is recognized to the
depth the transformations need: type declarations, members, statements,
loop headers, and declarators. Expression internals stay flat token runs;
the few expression-level questions (equality operands, generic type
arguments) are answered by focused scanners over significant tokens.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import javalex
from .errors import InputError
from .javalex import Token, tokenize
from .sourcetext import SourceText, Span

# Statement node kinds produced inside blocks.
STATEMENT_KINDS = frozenset(
    {
        "local_var_decl", "expr_stmt", "empty_stmt", "if_stmt", "for_stmt",
        "enhanced_for_stmt", "while_stmt", "do_stmt", "try_stmt", "switch_stmt",
        "sync_stmt", "labeled_stmt", "return_stmt", "throw_stmt", "break_stmt",
        "continue_stmt", "assert_stmt", "yield_stmt", "case_label", "block",
        "type_decl", "raw_stmt",
    }
)

CONTROL_FLOW_KINDS = frozenset(
    {
        "if_stmt", "for_stmt", "enhanced_for_stmt", "while_stmt", "do_stmt",
        "try_stmt", "switch_stmt", "sync_stmt", "labeled_stmt", "block",
        "case_label", "type_decl",
    }
)

_OPEN_TO_KIND = {"(": "paren", "[": "bracket", "{": "brace"}
_CLOSE_OF = {"(": ")", "[": "]", "{": "}"}


@dataclass(frozen=True)
class Node:
    """Tree node; leaves carry their token, inner nodes their children."""

    kind: str
    span: Span
    children: tuple[Node, ...] = ()
    token: Token | None = None

    @property
    def is_leaf(self) -> bool:
        return self.token is not None

    @property
    def is_trivia(self) -> bool:
        return self.token is not None and self.token.is_trivia

    def significant_children(self) -> list[Node]:
        return [c for c in self.children if not c.is_trivia]

    def iter_leaves(self):
        if self.token is not None:
            yield self
        else:
            for c in self.children:
                yield from c.iter_leaves()

    def walk(self):
        yield self
        for c in self.children:
            yield from c.walk()


@dataclass
class SyntaxTree:
    """Parse result: lossless node tree over ``text`` plus flat token stream."""

    text: SourceText
    root: Node
    tokens: list[Token]
    error: bool
    errors: list[str] = field(default_factory=list)

    def node_text(self, node: Node) -> str:
        return self.text.slice_bytes(node.span.start_byte, node.span.end_byte)

    def find_all(self, kind: str) -> list[Node]:
        return [n for n in self.root.walk() if n.kind == kind]


def parse_source(text: SourceText | str) -> SyntaxTree:
    """Parse Java source into a lossless structural tree.

    The error flag is set for lexical errors, bracket mismatches, and
    malformed statement shapes (missing terminators, empty initializers,
    headerless control statements).
    """
    if isinstance(text, str):
        text = SourceText(text)
    tokens, errors = tokenize(text.content)
    parser = _Parser(text, errors)
    grouped = parser.group(tokens)
    root_children = parser.parse_compilation_unit(grouped)
    if tokens:
        span = text.span(0, text.byte_len)
    else:
        span = Span(0, 0, 1, 1)
    root = Node("program", span, tuple(root_children))
    return SyntaxTree(text, root, tokens, bool(parser.errors), parser.errors)


class _Parser:
    def __init__(self, text: SourceText, errors: list[str]) -> None:
        self.text = text
        self.errors = list(errors)

    # ------------------------------------------------------------------
    # Phase A: bracket grouping
    # ------------------------------------------------------------------

    def group(self, tokens: list[Token]) -> list[Node]:
        items, pos = self._group_until(tokens, 0, None)
        while pos < len(tokens):
            # Stray closer at top level: record and keep it as a leaf.
            tok = tokens[pos]
            self.errors.append(f"unmatched {tok.text!r} at byte {tok.start}")
            items.append(self._leaf(tok))
            rest, pos2 = self._group_until(tokens, pos + 1, None)
            items.extend(rest)
            pos = pos2
        return items

    def _group_until(
        self, tokens: list[Token], i: int, closer: str | None
    ) -> tuple[list[Node], int]:
        items: list[Node] = []
        while i < len(tokens):
            tok = tokens[i]
            if tok.kind == javalex.PUNCT and tok.text in _OPEN_TO_KIND:
                inner, j = self._group_until(tokens, i + 1, _CLOSE_OF[tok.text])
                children = [self._leaf(tok), *inner]
                closed = j < len(tokens) and tokens[j].text == _CLOSE_OF[tok.text]
                if closed:
                    children.append(self._leaf(tokens[j]))
                    j += 1
                else:
                    self.errors.append(f"unclosed {tok.text!r} at byte {tok.start}")
                items.append(self._node(_OPEN_TO_KIND[tok.text], children))
                i = j
                continue
            if tok.kind == javalex.PUNCT and tok.text in ")]}":
                if closer is not None:
                    # Matching or mismatched closer ends this group either way.
                    if tok.text != closer:
                        self.errors.append(
                            f"mismatched {tok.text!r} at byte {tok.start}, expected {closer!r}"
                        )
                    return items, i
                return items, i
            items.append(self._leaf(tok))
            i += 1
        if closer is not None:
            pass  # caller reports the unclosed opener
        return items, i

    def _leaf(self, tok: Token) -> Node:
        return Node(tok.kind, self.text.span(tok.start, tok.end), token=tok)

    def _node(self, kind: str, children: list[Node]) -> Node:
        start = children[0].span.start_byte
        end = children[-1].span.end_byte
        return Node(kind, self.text.span(start, end), tuple(children))

    # ------------------------------------------------------------------
    # Phase B: structure
    # ------------------------------------------------------------------

    def parse_compilation_unit(self, items: list[Node]) -> list[Node]:
        # Members at top level: handles full compilation units as well as
        # bare method/field snippets used in small fixtures.
        return self._parse_members(items)

    def _pending_is_type_decl(self, pending: list[Node]) -> bool:
        return any(
            self._is_kw(c, "class", "interface", "enum", "record") for c in pending
        )

    def _parse_type_body(self, brace: Node) -> Node:
        inner = list(brace.children)
        has_close = (
            len(inner) >= 2
            and inner[-1].token is not None
            and inner[-1].token.text == "}"
        )
        body_items = inner[1:-1] if has_close else inner[1:]
        members = self._parse_members(body_items)
        children = [inner[0], *members] + ([inner[-1]] if has_close else [])
        return self._node("type_body", children)

    def _parse_members(self, items: list[Node]) -> list[Node]:
        out: list[Node] = []
        pending: list[Node] = []
        i = 0
        n = len(items)

        def flush(kind: str) -> None:
            if any(not c.is_trivia for c in pending):
                out.append(self._node(kind, list(pending)))
            else:
                out.extend(pending)
            pending.clear()

        while i < n:
            item = items[i]
            if item.is_trivia:
                (pending if pending else out).append(item)
                i += 1
                continue
            if item.token is not None and item.token.text == ";":
                pending.append(item)
                sig = [c for c in pending if not c.is_trivia]
                if self._looks_like_method_header(sig[:-1]):
                    kind = "method_decl"
                elif _match_declaration(sig[:-1]) is not None:
                    kind = "field_decl"
                else:
                    kind = "raw_stmt"
                flush(kind)
                if kind == "field_decl":
                    self._check_declarators(out[-1])
                i += 1
                continue
            if item.kind == "brace":
                sig = [c for c in pending if not c.is_trivia]
                if self._pending_is_type_decl(pending):
                    pending.append(self._parse_type_body(item))
                    flush("type_decl")
                    i += 1
                    continue
                if self._looks_like_method_header(sig):
                    body = self.parse_block(item)
                    pending.append(body)
                    name = _method_header_name(sig)
                    kind = "method_decl"
                    if name is not None and self._header_has_no_return_type(sig, name):
                        kind = "ctor_decl"
                    flush(kind)
                    i += 1
                    continue
                if not sig or (len(sig) == 1 and self._is_kw(sig[0], "static")):
                    pending.append(self.parse_block(item))
                    flush("init_block")
                    i += 1
                    continue
                # Part of a field initializer (array literal); keep accumulating.
                pending.append(item)
                i += 1
                continue
            pending.append(item)
            i += 1
        if pending:
            flush("raw_stmt")
        return out

    def _looks_like_method_header(self, sig: list[Node]) -> bool:
        """Identifier directly followed by a paren group, with no '=' before it."""
        for idx, node in enumerate(sig):
            if node.token is not None and node.token.text == "=":
                return False
            if node.kind == "paren" and idx > 0:
                prev = sig[idx - 1]
                if prev.token is not None and prev.token.kind == javalex.IDENTIFIER:
                    return True
        return False

    def _header_has_no_return_type(self, sig: list[Node], name: Node) -> bool:
        """Constructor shape: nothing type-like before the name except modifiers."""
        mods = {"public", "private", "protected", "static", "final", "synchronized",
                "abstract", "native", "strictfp", "default"}
        prev_was_at = False
        for node in sig:
            if node is name:
                return True
            tok = node.token
            if tok is not None and tok.text == "@":
                prev_was_at = True
                continue
            if tok is not None and tok.kind == javalex.IDENTIFIER and prev_was_at:
                prev_was_at = False
                continue  # annotation name
            prev_was_at = False
            if tok is not None and tok.kind == javalex.KEYWORD and tok.text in mods:
                continue
            return False
        return False

    # ------------------------------------------------------------------
    # Statements
    # ------------------------------------------------------------------

    def parse_block(self, brace: Node) -> Node:
        inner = list(brace.children)
        has_close = (
            len(inner) >= 2
            and inner[-1].token is not None
            and inner[-1].token.text == "}"
        )
        body_items = inner[1:-1] if has_close else inner[1:]
        stmts = self.parse_statements(body_items)
        children = [inner[0], *stmts] + ([inner[-1]] if has_close else [])
        return self._node("block", children)

    def parse_statements(self, items: list[Node]) -> list[Node]:
        out: list[Node] = []
        i = 0
        n = len(items)
        while i < n:
            if items[i].is_trivia:
                out.append(items[i])
                i += 1
                continue
            stmt, i = self.parse_statement(items, i)
            out.append(stmt)
        return out

    def parse_statement(self, items: list[Node], i: int) -> tuple[Node, int]:
        start = i
        item = items[i]

        if item.kind == "brace":
            return self.parse_block(item), i + 1

        if item.token is not None and item.token.text == ";":
            return self._node("empty_stmt", [item]), i + 1

        if item.token is not None and item.token.kind == javalex.KEYWORD:
            kw = item.token.text
            if kw == "if":
                return self._parse_if(items, i)
            if kw == "for":
                return self._parse_for(items, i)
            if kw == "while":
                return self._parse_while(items, i)
            if kw == "do":
                return self._parse_do(items, i)
            if kw == "try":
                return self._parse_try(items, i)
            if kw == "switch":
                return self._parse_switch(items, i)
            if kw == "synchronized":
                return self._parse_sync(items, i)
            if kw in ("return", "throw", "break", "continue", "assert", "yield"):
                kind = {"return": "return_stmt", "throw": "throw_stmt",
                        "break": "break_stmt", "continue": "continue_stmt",
                        "assert": "assert_stmt", "yield": "yield_stmt"}[kw]
                return self._consume_simple(items, i, kind)
            if kw in ("case", "default"):
                return self._consume_case_label(items, i)
            if kw in ("class", "interface", "enum", "record"):
                return self._consume_local_type(items, i)

        # Label: identifier directly followed by ':'.
        if (
            item.token is not None
            and item.token.kind == javalex.IDENTIFIER
        ):
            j = _next_sig(items, i + 1)
            if (
                j is not None
                and items[j].token is not None
                and items[j].token.text == ":"
            ):
                consumed = items[i : j + 1]
                body, k = self.parse_statement(items, _skip_trivia(items, j + 1))
                trivia = items[j + 1 : _skip_trivia(items, j + 1)]
                return self._node("labeled_stmt", [*consumed, *trivia, body]), k

        return self._consume_decl_or_expr(items, i)

    def _consume_until_semi(self, items: list[Node], i: int) -> tuple[list[Node], int]:
        consumed: list[Node] = []
        n = len(items)
        while i < n:
            consumed.append(items[i])
            tok = items[i].token
            i += 1
            if tok is not None and tok.text == ";":
                return consumed, i
        self.errors.append(
            f"statement starting at byte {consumed[0].span.start_byte} lacks ';'"
        )
        return consumed, i

    def _consume_simple(self, items: list[Node], i: int, kind: str) -> tuple[Node, int]:
        consumed, i = self._consume_until_semi(items, i)
        return self._node(kind, consumed), i

    def _consume_case_label(self, items: list[Node], i: int) -> tuple[Node, int]:
        consumed: list[Node] = []
        n = len(items)
        while i < n:
            consumed.append(items[i])
            tok = items[i].token
            i += 1
            if tok is not None and tok.text in (":", ";"):
                break
            if tok is not None and tok.text == "->":
                # Arrow switch rule: the statement after the arrow belongs to it.
                j = _skip_trivia(items, i)
                consumed.extend(items[i:j])
                stmt, i = self.parse_statement(items, j)
                consumed.append(stmt)
                break
        return self._node("case_label", consumed), i

    def _consume_local_type(self, items: list[Node], i: int) -> tuple[Node, int]:
        consumed: list[Node] = []
        n = len(items)
        while i < n:
            item = items[i]
            if item.kind == "brace":
                consumed.append(self._parse_type_body(item))
                i += 1
                break
            consumed.append(item)
            i += 1
        return self._node("type_decl", consumed), i

    def _expect_paren(self, items: list[Node], i: int, what: str) -> tuple[list[Node], int, Node | None]:
        """Consume trivia then a paren group; returns (consumed, next_i, paren|None)."""
        j = _skip_trivia(items, i)
        consumed = list(items[i:j])
        if j < len(items) and items[j].kind == "paren":
            consumed.append(items[j])
            return consumed, j + 1, items[j]
        self.errors.append(f"{what} at byte {items[i - 1].span.start_byte} lacks (...)")
        return consumed, j, None

    def _sub_statement(self, items: list[Node], i: int) -> tuple[list[Node], int]:
        j = _skip_trivia(items, i)
        consumed = list(items[i:j])
        if j >= len(items):
            self.errors.append("missing statement body at end of block")
            return consumed, j
        stmt, k = self.parse_statement(items, j)
        consumed.append(stmt)
        return consumed, k

    def _parse_if(self, items: list[Node], i: int) -> tuple[Node, int]:
        consumed = [items[i]]
        more, i, paren = self._expect_paren(items, i + 1, "if")
        consumed.extend(more)
        if paren is not None:
            body, i = self._sub_statement(items, i)
            consumed.extend(body)
            j = _next_sig(items, i)
            if j is not None and self._is_kw(items[j], "else"):
                consumed.extend(items[i : j + 1])
                body, i = self._sub_statement(items, j + 1)
                consumed.extend(body)
        return self._node("if_stmt", consumed), i

    def _parse_for(self, items: list[Node], i: int) -> tuple[Node, int]:
        consumed = [items[i]]
        more, i, paren = self._expect_paren(items, i + 1, "for")
        consumed.extend(more)
        kind = "for_stmt"
        if paren is not None:
            if _header_top_level_colon(paren):
                kind = "enhanced_for_stmt"
            body, i = self._sub_statement(items, i)
            consumed.extend(body)
        return self._node(kind, consumed), i

    def _parse_while(self, items: list[Node], i: int) -> tuple[Node, int]:
        consumed = [items[i]]
        more, i, paren = self._expect_paren(items, i + 1, "while")
        consumed.extend(more)
        if paren is not None:
            body, i = self._sub_statement(items, i)
            consumed.extend(body)
        return self._node("while_stmt", consumed), i

    def _parse_do(self, items: list[Node], i: int) -> tuple[Node, int]:
        consumed = [items[i]]
        body, i = self._sub_statement(items, i + 1)
        consumed.extend(body)
        j = _next_sig(items, i)
        if j is not None and self._is_kw(items[j], "while"):
            consumed.extend(items[i : j + 1])
            more, i, _ = self._expect_paren(items, j + 1, "do-while")
            consumed.extend(more)
            j2 = _next_sig(items, i)
            if j2 is not None and items[j2].token is not None and items[j2].token.text == ";":
                consumed.extend(items[i : j2 + 1])
                i = j2 + 1
        else:
            self.errors.append("do statement lacks trailing while clause")
        return self._node("do_stmt", consumed), i

    def _parse_try(self, items: list[Node], i: int) -> tuple[Node, int]:
        consumed = [items[i]]
        i += 1
        j = _next_sig(items, i)
        if j is not None and items[j].kind == "paren":  # try-with-resources
            consumed.extend(items[i : j + 1])
            i = j + 1
            j = _next_sig(items, i)
        if j is not None and items[j].kind == "brace":
            consumed.extend(items[i:j])
            consumed.append(self.parse_block(items[j]))
            i = j + 1
        else:
            self.errors.append("try statement lacks a block")
            return self._node("try_stmt", consumed), i
        while True:
            j = _next_sig(items, i)
            if j is not None and self._is_kw(items[j], "catch"):
                consumed.extend(items[i : j + 1])
                more, i, _ = self._expect_paren(items, j + 1, "catch")
                consumed.extend(more)
                j2 = _next_sig(items, i)
                if j2 is not None and items[j2].kind == "brace":
                    consumed.extend(items[i:j2])
                    consumed.append(self.parse_block(items[j2]))
                    i = j2 + 1
                else:
                    self.errors.append("catch clause lacks a block")
                    break
                continue
            if j is not None and self._is_kw(items[j], "finally"):
                consumed.extend(items[i : j + 1])
                j2 = _next_sig(items, j + 1)
                if j2 is not None and items[j2].kind == "brace":
                    consumed.extend(items[j + 1 : j2])
                    consumed.append(self.parse_block(items[j2]))
                    i = j2 + 1
                else:
                    self.errors.append("finally clause lacks a block")
                break
            break
        return self._node("try_stmt", consumed), i

    def _parse_switch(self, items: list[Node], i: int) -> tuple[Node, int]:
        consumed = [items[i]]
        more, i, paren = self._expect_paren(items, i + 1, "switch")
        consumed.extend(more)
        j = _next_sig(items, i)
        if j is not None and items[j].kind == "brace":
            consumed.extend(items[i:j])
            consumed.append(self.parse_block(items[j]))
            i = j + 1
        else:
            self.errors.append("switch statement lacks a block")
        return self._node("switch_stmt", consumed), i

    def _parse_sync(self, items: list[Node], i: int) -> tuple[Node, int]:
        consumed = [items[i]]
        more, i, _ = self._expect_paren(items, i + 1, "synchronized")
        consumed.extend(more)
        j = _next_sig(items, i)
        if j is not None and items[j].kind == "brace":
            consumed.extend(items[i:j])
            consumed.append(self.parse_block(items[j]))
            i = j + 1
        return self._node("sync_stmt", consumed), i

    def _consume_decl_or_expr(self, items: list[Node], i: int) -> tuple[Node, int]:
        consumed, i = self._consume_until_semi(items, i)
        sig = [c for c in consumed if not c.is_trivia]
        if sig and sig[-1].token is not None and sig[-1].token.text == ";":
            body_sig = sig[:-1]
        else:
            body_sig = sig
        if _match_declaration(body_sig) is not None:
            node = self._node("local_var_decl", consumed)
            self._check_declarators(node)
            return node, i
        return self._node("expr_stmt", consumed), i

    def _check_declarators(self, node: Node) -> None:
        info = local_var_decl_info(node)
        if info is None:
            return
        for d in info.declarators:
            if d.has_init and not d.init_items:
                self.errors.append(
                    f"empty initializer for {d.name_token.text!r} "
                    f"at byte {d.name_token.start}"
                )

    @staticmethod
    def _is_kw(node: Node, *words: str) -> bool:
        return (
            node.token is not None
            and node.token.kind == javalex.KEYWORD
            and node.token.text in words
        )


# ----------------------------------------------------------------------
# Flat helpers over item lists
# ----------------------------------------------------------------------


def _skip_trivia(items: list[Node], i: int) -> int:
    while i < len(items) and items[i].is_trivia:
        i += 1
    return i


def _next_sig(items: list[Node], i: int) -> int | None:
    j = _skip_trivia(items, i)
    return j if j < len(items) else None


def _header_top_level_colon(paren: Node) -> bool:
    for c in paren.children[1:-1]:
        if c.token is not None and c.token.text == ":":
            return True
    return False


def _method_header_name(sig: list[Node]) -> Node | None:
    for idx, node in enumerate(sig):
        if node.kind == "paren" and idx > 0:
            prev = sig[idx - 1]
            if prev.token is not None and prev.token.kind == javalex.IDENTIFIER:
                return prev
    return None


# ----------------------------------------------------------------------
# Type / declaration pattern matching over significant items
# ----------------------------------------------------------------------

_TYPEARG_OK_TEXT = frozenset({".", ",", "?", "<", ">", ">>", ">>>", "&", "[", "]", "@"})
_TYPEARG_OK_KW = frozenset({"extends", "super"} | javalex.PRIMITIVE_TYPES)


def match_generic_args(sig: list[Node], i: int) -> int | None:
    """If ``sig[i]`` opens a plausible generic argument list, return the index
    just past its closing ``>``; otherwise None.

    Only type-ish tokens may appear inside; ``>>``/``>>>`` close several
    levels at once.
    """
    node = sig[i]
    if node.token is None or node.token.text != "<":
        return None
    depth = 0
    j = i
    while j < len(sig):
        tok = sig[j].token
        if tok is None:
            return None  # groups never appear inside type arguments
        t = tok.text
        if t == "<":
            depth += 1
        elif t in (">", ">>", ">>>"):
            depth -= len(t)
            if depth <= 0:
                return j + 1 if depth == 0 else None
        elif tok.kind == javalex.IDENTIFIER:
            pass
        elif tok.kind == javalex.KEYWORD and t in _TYPEARG_OK_KW:
            pass
        elif t in _TYPEARG_OK_TEXT:
            pass
        else:
            return None
        j += 1
    return None


def _match_type_ref(sig: list[Node], i: int) -> int | None:
    """Match a type reference starting at ``i``; return index past it."""
    n = len(sig)
    if i >= n:
        return None
    node = sig[i]
    tok = node.token
    if tok is None:
        return None
    if tok.kind == javalex.KEYWORD and tok.text in (javalex.PRIMITIVE_TYPES | {"var", "void"}):
        i += 1
    elif tok.kind == javalex.IDENTIFIER:
        i += 1
        # Qualified name segments.
        while (
            i + 1 < n
            and sig[i].token is not None
            and sig[i].token.text == "."
            and sig[i + 1].token is not None
            and sig[i + 1].token.kind == javalex.IDENTIFIER
        ):
            i += 2
        if i < n:
            g = match_generic_args(sig, i)
            if g is not None:
                i = g
    else:
        return None
    # Array dimensions: empty bracket groups.
    while i < n and sig[i].kind == "bracket" and len(sig[i].significant_children()) == 2:
        i += 1
    return i


_DECL_MODIFIERS = (
    "final", "public", "private", "protected", "static", "transient", "volatile"
)


def _match_declaration(sig: list[Node]) -> int | None:
    """If ``sig`` (a statement without its ';') is a local variable or
    field declaration, return the index of the first declarator name."""
    i = 0
    n = len(sig)
    while i < n and (
        _Parser._is_kw(sig[i], *_DECL_MODIFIERS)
        or (sig[i].token is not None and sig[i].token.text == "@")
        or (
            i > 0
            and sig[i - 1].token is not None
            and sig[i - 1].token.text == "@"
            and sig[i].token is not None
            and sig[i].token.kind == javalex.IDENTIFIER
        )
    ):
        i += 1
    j = _match_type_ref(sig, i)
    if j is None or j >= n:
        return None
    name = sig[j]
    if name.token is None or name.token.kind != javalex.IDENTIFIER:
        return None
    k = j + 1
    if k == n:
        return j
    nxt = sig[k]
    if nxt.kind == "bracket":
        return j  # trailing array dims on the declarator
    if nxt.token is not None and nxt.token.text in ("=", ",", ";"):
        return j
    return None


@dataclass(frozen=True)
class Declarator:
    name_token: Token
    has_init: bool
    init_items: tuple[Node, ...]  # significant items of the initializer


@dataclass(frozen=True)
class LocalVarDeclInfo:
    type_text: str
    type_end_byte: int
    declarators: tuple[Declarator, ...]


def local_var_decl_info(node: Node) -> LocalVarDeclInfo | None:
    """Split a local_var_decl (or field_decl) into type text and declarators."""
    sig = [c for c in node.children if not c.is_trivia]
    if sig and sig[-1].token is not None and sig[-1].token.text == ";":
        sig = sig[:-1]
    first_name = _match_declaration(sig)
    if first_name is None:
        return None
    type_nodes = sig[:first_name]
    type_text = " ".join(
        n.token.text if n.token is not None else "[]" for n in type_nodes
    )
    declarators: list[Declarator] = []
    i = first_name
    n = len(sig)
    while i < n:
        name = sig[i]
        if name.token is None or name.token.kind != javalex.IDENTIFIER:
            break
        i += 1
        while i < n and sig[i].kind == "bracket":
            i += 1
        has_init = False
        init_items: list[Node] = []
        if i < n and sig[i].token is not None and sig[i].token.text == "=":
            has_init = True
            i += 1
            while i < n:
                item = sig[i]
                if item.token is not None and item.token.text == ",":
                    break
                if item.token is not None and item.token.text == "<":
                    g = match_generic_args(sig, i)
                    if g is not None:
                        init_items.extend(sig[i:g])
                        i = g
                        continue
                init_items.append(item)
                i += 1
        declarators.append(Declarator(name.token, has_init, tuple(init_items)))
        if i < n and sig[i].token is not None and sig[i].token.text == ",":
            i += 1
            continue
        break
    if not declarators:
        return None
    return LocalVarDeclInfo(type_text, type_nodes[-1].span.end_byte if type_nodes else 0, tuple(declarators))


# ----------------------------------------------------------------------
# Accessors used by scope resolution and the transformations
# ----------------------------------------------------------------------


@dataclass(frozen=True)
class MethodInfo:
    node: Node
    name_token: Token
    params: Node  # the paren group
    body: Node | None  # block node, None for abstract/native
    is_ctor: bool


def methods_of(tree: SyntaxTree) -> list[MethodInfo]:
    """All method and constructor declarations, document order."""
    out: list[MethodInfo] = []
    for node in tree.root.walk():
        if node.kind not in ("method_decl", "ctor_decl"):
            continue
        sig = node.significant_children()
        name = _method_header_name(sig)
        if name is None or name.token is None:
            continue
        params = None
        for idx, c in enumerate(sig):
            if c.kind == "paren" and idx > 0 and sig[idx - 1] is name:
                params = c
                break
        if params is None:
            continue
        body = next((c for c in reversed(sig) if c.kind == "block"), None)
        out.append(MethodInfo(node, name.token, params, body, node.kind == "ctor_decl"))
    out.sort(key=lambda m: m.node.span.start_byte)
    return out


@dataclass(frozen=True)
class ParamInfo:
    name_token: Token
    type_text: str


def params_of(params_group: Node) -> list[ParamInfo]:
    """Parameter names in a method header's paren group."""
    inner = params_group.significant_children()[1:-1]
    out: list[ParamInfo] = []
    if not inner:
        return out
    # Split on top-level commas; generic args inside types are consumed.
    parts: list[list[Node]] = [[]]
    i = 0
    while i < len(inner):
        item = inner[i]
        if item.token is not None and item.token.text == "<":
            g = match_generic_args(inner, i)
            if g is not None:
                parts[-1].extend(inner[i:g])
                i = g
                continue
        if item.token is not None and item.token.text == ",":
            parts.append([])
            i += 1
            continue
        parts[-1].append(item)
        i += 1
    for part in parts:
        name = None
        for node in reversed(part):
            if node.token is not None and node.token.kind == javalex.IDENTIFIER:
                name = node
                break
        if name is None:
            continue
        type_text = " ".join(
            n.token.text if n.token is not None else "[]"
            for n in part
            if n is not name
        )
        out.append(ParamInfo(name.token, type_text))
    return out


@dataclass(frozen=True)
class ForParts:
    init_items: tuple[Node, ...]
    cond_items: tuple[Node, ...]
    update_items: tuple[Node, ...]


def for_parts(for_node: Node) -> ForParts | None:
    """Split a classic for header into init/cond/update significant items."""
    paren = next((c for c in for_node.children if c.kind == "paren"), None)
    if paren is None:
        return None
    inner = paren.significant_children()[1:-1]
    parts: list[list[Node]] = [[]]
    for item in inner:
        if item.token is not None and item.token.text == ";":
            parts.append([])
        else:
            parts[-1].append(item)
    if len(parts) != 3:
        return None
    return ForParts(tuple(parts[0]), tuple(parts[1]), tuple(parts[2]))


def loop_header_paren(node: Node) -> Node | None:
    return next((c for c in node.children if c.kind == "paren"), None)


def loop_body(node: Node) -> Node | None:
    """The statement node serving as a loop's body."""
    paren_seen = False
    for c in node.children:
        if c.kind == "paren" and not paren_seen:
            paren_seen = True
            continue
        if paren_seen and not c.is_trivia and c.kind in STATEMENT_KINDS:
            return c
    return None


def block_statements(block: Node) -> list[Node]:
    return [c for c in block.children if c.kind in STATEMENT_KINDS]


def items_text(text: SourceText, items: tuple[Node, ...] | list[Node]) -> str:
    """Source text from the first to the last item, trimmed to their spans."""
    if not items:
        return ""
    return text.slice_bytes(items[0].span.start_byte, items[-1].span.end_byte)


def reparses_cleanly(source: str) -> bool:
    tree = parse_source(source)
    return not tree.error


def require_clean(tree: SyntaxTree) -> None:
    if tree.error:
        raise InputError("parse errors: " + "; ".join(tree.errors[:5]))

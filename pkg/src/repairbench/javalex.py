"""Lossless Java tokenizer with byte-accurate spans.

Every byte of the input lands in exactly one token, including whitespace
and comments, so a token stream can be rejoined into the original text.
Offsets are byte offsets into the UTF-8 encoding; downstream spans and
line maps depend on that.
"""

from __future__ import annotations

from dataclasses import dataclass

# Reserved words, plus the literals the grammar treats as keywords.
KEYWORDS = frozenset(
    """abstract assert boolean break byte case catch char class const continue
    default do double else enum extends final finally float for goto if
    implements import instanceof int interface long native new package private
    protected public return short static strictfp super switch synchronized
    this throw throws transient try void volatile while true false null
    var record yield sealed permits""".split()
)

PRIMITIVE_TYPES = frozenset(
    {"boolean", "byte", "char", "short", "int", "long", "float", "double"}
)

# Longest first so greedy matching picks the right operator.
_OPERATORS = sorted(
    [
        ">>>=", ">>>", ">>=", "<<=", ">>", "<<", "->", "::", "==", "!=", "<=",
        ">=", "&&", "||", "++", "--", "+=", "-=", "*=", "/=", "%=", "&=", "|=",
        "^=", "...", "+", "-", "*", "/", "%", "<", ">", "=", "!", "~", "&",
        "|", "^", "?", ":", "@",
    ],
    key=len,
    reverse=True,
)

_PUNCT = frozenset("(){}[];,.")

WS = "ws"
COMMENT = "comment"
IDENTIFIER = "identifier"
KEYWORD = "keyword"
NUMBER = "number"
STRING = "string"
CHAR = "char"
OPERATOR = "operator"
PUNCT = "punct"
ERROR = "error"

_TRIVIA = frozenset({WS, COMMENT})


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    start: int  # byte offset, inclusive
    end: int  # byte offset, exclusive

    @property
    def is_trivia(self) -> bool:
        return self.kind in _TRIVIA


def _is_ident_start(ch: str) -> bool:
    return ch.isalpha() or ch in "_$"


def _is_ident_part(ch: str) -> bool:
    return ch.isalnum() or ch in "_$"


def is_valid_identifier(name: str) -> bool:
    """Lexically valid Java identifier that is not a reserved word."""
    if not name or name in KEYWORDS:
        return False
    if not _is_ident_start(name[0]):
        return False
    return all(_is_ident_part(c) for c in name[1:])


def tokenize(text: str) -> tuple[list[Token], list[str]]:
    """Tokenize Java source; returns (tokens, lexical error messages).

    Unterminated literals and comments produce an ``error`` token running
    to end of input so the stream stays lossless.
    """
    tokens: list[Token] = []
    errors: list[str] = []
    n = len(text)
    i = 0  # char index
    b = 0  # byte offset of text[i]

    def blen(s: str) -> int:
        return len(s) if s.isascii() else len(s.encode("utf-8"))

    def emit(kind: str, j: int) -> None:
        nonlocal i, b
        chunk = text[i:j]
        end = b + blen(chunk)
        tokens.append(Token(kind, chunk, b, end))
        i, b = j, end

    while i < n:
        ch = text[i]

        if ch.isspace():
            j = i + 1
            while j < n and text[j].isspace():
                j += 1
            emit(WS, j)
            continue

        if ch == "/" and i + 1 < n and text[i + 1] == "/":
            j = text.find("\n", i)
            emit(COMMENT, n if j == -1 else j)
            continue

        if ch == "/" and i + 1 < n and text[i + 1] == "*":
            j = text.find("*/", i + 2)
            if j == -1:
                errors.append(f"unterminated block comment at byte {b}")
                emit(ERROR, n)
            else:
                emit(COMMENT, j + 2)
            continue

        if ch == '"':
            if text.startswith('"""', i):
                j = text.find('"""', i + 3)
                if j == -1:
                    errors.append(f"unterminated text block at byte {b}")
                    emit(ERROR, n)
                else:
                    emit(STRING, j + 3)
                continue
            j = i + 1
            closed = False
            while j < n:
                if text[j] == "\\" and j + 1 < n:
                    j += 2
                    continue
                if text[j] == '"':
                    closed = True
                    j += 1
                    break
                if text[j] == "\n":
                    break
                j += 1
            if not closed:
                errors.append(f"unterminated string literal at byte {b}")
                emit(ERROR, j)
            else:
                emit(STRING, j)
            continue

        if ch == "'":
            j = i + 1
            closed = False
            while j < n:
                if text[j] == "\\" and j + 1 < n:
                    j += 2
                    continue
                if text[j] == "'":
                    closed = True
                    j += 1
                    break
                if text[j] == "\n":
                    break
                j += 1
            if not closed:
                errors.append(f"unterminated char literal at byte {b}")
                emit(ERROR, j)
            else:
                emit(CHAR, j)
            continue

        if ch.isdigit() or (ch == "." and i + 1 < n and text[i + 1].isdigit()):
            j = i
            if text.startswith(("0x", "0X", "0b", "0B"), i):
                j = i + 2
                while j < n and (text[j] in "0123456789abcdefABCDEF_"):
                    j += 1
            else:
                seen_exp = False
                while j < n:
                    c = text[j]
                    if c.isdigit() or c in "._":
                        j += 1
                    elif c in "eE" and not seen_exp and j + 1 < n and (
                        text[j + 1].isdigit() or text[j + 1] in "+-"
                    ):
                        seen_exp = True
                        j += 2 if text[j + 1] in "+-" else 1
                    else:
                        break
            if j < n and text[j] in "lLdDfF":
                j += 1
            emit(NUMBER, j)
            continue

        if _is_ident_start(ch):
            j = i + 1
            while j < n and _is_ident_part(text[j]):
                j += 1
            word = text[i:j]
            emit(KEYWORD if word in KEYWORDS else IDENTIFIER, j)
            continue

        if ch in _PUNCT:
            emit(PUNCT, i + 1)
            continue

        for op in _OPERATORS:
            if text.startswith(op, i):
                emit(OPERATOR, i + len(op))
                break
        else:
            errors.append(f"unexpected character {ch!r} at byte {b}")
            emit(ERROR, i + 1)

    return tokens, errors

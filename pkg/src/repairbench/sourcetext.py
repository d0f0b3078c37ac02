"""Source text carriers: byte-addressed spans, edit scripts, line maps.

Everything downstream (parsing, transformation, buggy-line remapping)
speaks in byte offsets into the UTF-8 encoding of the source and in
1-based, inclusive line numbers. Line maps are produced exclusively by
``apply_edits`` so that remapping is mechanical: the map is derived from
the same edit script that produced the output text.
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass
from functools import cached_property

from .errors import ContractViolation, InputError


@dataclass(frozen=True)
class Span:
    """A byte range [start_byte, end_byte) plus the 1-based line range it covers."""

    start_byte: int
    end_byte: int
    start_line: int
    end_line: int

    def __post_init__(self) -> None:
        if self.start_byte < 0 or self.end_byte < self.start_byte:
            raise ContractViolation(f"invalid byte range [{self.start_byte}, {self.end_byte})")
        if self.start_line < 1 or self.end_line < self.start_line:
            raise ContractViolation(f"invalid line range {self.start_line}..{self.end_line}")

    @property
    def is_empty(self) -> bool:
        return self.start_byte == self.end_byte

    def contains_byte(self, offset: int) -> bool:
        return self.start_byte <= offset < self.end_byte

    def overlaps(self, other: Span) -> bool:
        return self.start_byte < other.end_byte and other.start_byte < self.end_byte


class SourceText:
    """Immutable UTF-8 source with a byte-offset line index.

    ``line_index`` holds the byte offset of every line start; the first
    entry is always 0. Reconstructing the lines and rejoining them with
    the newline separator yields ``content`` byte-exactly.
    """

    __slots__ = ("content", "_data", "_line_index", "_char_to_byte", "_byte_to_char", "__dict__")

    def __init__(self, content: str) -> None:
        try:
            data = content.encode("utf-8")
        except UnicodeEncodeError as err:
            raise InputError(f"source is not encodable as UTF-8: {err}") from err
        self.content = content
        self._data = data
        starts = [0]
        for i, b in enumerate(data):
            if b == 0x0A:
                starts.append(i + 1)
        self._line_index = tuple(starts)
        if len(data) == len(content):
            self._char_to_byte: tuple[int, ...] | None = None
            self._byte_to_char: dict[int, int] | None = None
        else:
            c2b = [0] * (len(content) + 1)
            b2c: dict[int, int] = {}
            pos = 0
            for i, ch in enumerate(content):
                c2b[i] = pos
                b2c[pos] = i
                pos += len(ch.encode("utf-8"))
            c2b[len(content)] = pos
            b2c[pos] = len(content)
            self._char_to_byte = tuple(c2b)
            self._byte_to_char = b2c

    @property
    def line_index(self) -> tuple[int, ...]:
        return self._line_index

    @property
    def byte_len(self) -> int:
        return len(self._data)

    @property
    def num_lines(self) -> int:
        return len(self._line_index)

    def byte_of_char(self, char_offset: int) -> int:
        if self._char_to_byte is None:
            return char_offset
        return self._char_to_byte[char_offset]

    def char_of_byte(self, byte_offset: int) -> int:
        if self._byte_to_char is None:
            return byte_offset
        try:
            return self._byte_to_char[byte_offset]
        except KeyError:
            raise ContractViolation(f"byte offset {byte_offset} is not a character boundary")

    def slice_bytes(self, start_byte: int, end_byte: int) -> str:
        return self.content[self.char_of_byte(start_byte) : self.char_of_byte(end_byte)]

    def line_of_byte(self, byte_offset: int) -> int:
        """1-based line containing ``byte_offset`` (EOF belongs to the last line)."""
        if byte_offset < 0 or byte_offset > self.byte_len:
            raise ContractViolation(f"byte offset {byte_offset} out of range")
        return bisect_right(self._line_index, byte_offset)

    def line_start(self, line: int) -> int:
        self._check_line(line)
        return self._line_index[line - 1]

    def line_content_end(self, line: int) -> int:
        """Byte offset just past the line's content, excluding its newline."""
        self._check_line(line)
        if line < self.num_lines:
            return self._line_index[line] - 1
        return self.byte_len

    def line_extent_end(self, line: int) -> int:
        """Byte offset just past the line including its newline, if any."""
        self._check_line(line)
        if line < self.num_lines:
            return self._line_index[line]
        return self.byte_len

    def line_text(self, line: int) -> str:
        return self.slice_bytes(self.line_start(line), self.line_content_end(line))

    @cached_property
    def lines(self) -> tuple[str, ...]:
        return tuple(self.line_text(i) for i in range(1, self.num_lines + 1))

    def span(self, start_byte: int, end_byte: int) -> Span:
        """Build a Span for [start_byte, end_byte) with consistent line numbers."""
        if not 0 <= start_byte <= end_byte <= self.byte_len:
            raise ContractViolation(
                f"byte range [{start_byte}, {end_byte}) outside source of {self.byte_len} bytes"
            )
        start_line = self.line_of_byte(start_byte)
        end_line = self.line_of_byte(end_byte - 1) if end_byte > start_byte else start_line
        return Span(start_byte, end_byte, start_line, max(start_line, end_line))

    def span_of_lines(self, start_line: int, end_line: int) -> Span:
        """Span covering the full content of an inclusive 1-based line range."""
        self._check_line(start_line)
        self._check_line(end_line)
        if end_line < start_line:
            raise ContractViolation(f"invalid line range {start_line}..{end_line}")
        return Span(
            self.line_start(start_line),
            self.line_content_end(end_line),
            start_line,
            end_line,
        )

    def _check_line(self, line: int) -> None:
        if not 1 <= line <= self.num_lines:
            raise ContractViolation(f"line {line} out of range 1..{self.num_lines}")

    def __eq__(self, other: object) -> bool:
        return isinstance(other, SourceText) and self.content == other.content

    def __hash__(self) -> int:
        return hash(self.content)

    def __repr__(self) -> str:
        return f"SourceText({len(self.content)} chars, {self.num_lines} lines)"


@dataclass(frozen=True)
class Edit:
    """Replace the bytes of ``target`` (in the original text) with ``replacement``."""

    target: Span
    replacement: str

    @staticmethod
    def replace(text: SourceText, start_byte: int, end_byte: int, replacement: str) -> Edit:
        return Edit(text.span(start_byte, end_byte), replacement)

    @staticmethod
    def insert(text: SourceText, at_byte: int, replacement: str) -> Edit:
        return Edit(text.span(at_byte, at_byte), replacement)


@dataclass(frozen=True)
class LineEntry:
    """Where one original line landed in the edited text."""

    original_line: int
    new_start: int
    new_end: int
    edited: bool
    deleted: bool


class LineMap:
    """Total mapping from original line numbers to output line ranges.

    Unedited lines map one-to-one and monotonically; lines intersecting an
    edit are flagged ``edited`` and carry the output range their bytes were
    folded into (``deleted`` when the whole line was removed). The map
    keeps a reference to the text it was derived from.
    """

    def __init__(self, entries: tuple[LineEntry, ...], original: SourceText) -> None:
        self._entries = entries
        self.original = original

    @staticmethod
    def identity(text: SourceText) -> LineMap:
        return LineMap(
            tuple(LineEntry(i, i, i, False, False) for i in range(1, text.num_lines + 1)),
            text,
        )

    @property
    def entries(self) -> tuple[LineEntry, ...]:
        return self._entries

    def map_line(self, line: int) -> LineEntry:
        if not 1 <= line <= len(self._entries):
            raise ContractViolation(f"line {line} out of range 1..{len(self._entries)}")
        return self._entries[line - 1]

    def map_range(self, start_line: int, end_line: int) -> tuple[int, int, bool]:
        """Map an inclusive line range; the flag reports whether any line was edited."""
        if end_line < start_line:
            raise ContractViolation(f"invalid line range {start_line}..{end_line}")
        first = self.map_line(start_line)
        last = self.map_line(end_line)
        touched = any(
            self._entries[i - 1].edited for i in range(start_line, end_line + 1)
        )
        return first.new_start, last.new_end, touched

    def __len__(self) -> int:
        return len(self._entries)


def _edit_touches_line(edit: Edit, text: SourceText, line: int) -> bool:
    """Whether applying ``edit`` changes the rendered content of ``line``.

    Pure whole-line insertions (an empty target at a line start whose
    replacement ends with a newline, or at a line's content end whose
    replacement starts with one) leave the line's own content intact and
    do not count as touching it.
    """
    ls = text.line_start(line)
    le = text.line_content_end(line)
    ee = text.line_extent_end(line)
    span = edit.target
    if not span.is_empty:
        if span.start_byte < ee and span.end_byte > ls:
            return True
        # Swallowing the newline just before this line merges it into the
        # previous one unless the replacement restores a trailing newline.
        if span.end_byte == ls and ls > 0 and not edit.replacement.endswith("\n"):
            return True
        return False
    p = span.start_byte
    if not ls <= p <= le:
        # Insertion inside the newline region or on another line.
        return False
    if p == ls and edit.replacement.endswith("\n"):
        return False
    if p == le and (edit.replacement.startswith("\n") or edit.replacement == ""):
        return False
    return True


def edit_touches_lines(edit: Edit, text: SourceText, start_line: int, end_line: int) -> bool:
    return any(_edit_touches_line(edit, text, ln) for ln in range(start_line, end_line + 1))


def _validate_edits(text: SourceText, edits: list[Edit]) -> list[Edit]:
    ordered = sorted(edits, key=lambda e: (e.target.start_byte, e.target.end_byte))
    for e in ordered:
        if e.target.end_byte > text.byte_len:
            raise ContractViolation(
                f"edit span [{e.target.start_byte}, {e.target.end_byte}) "
                f"exceeds source of {text.byte_len} bytes"
            )
    for prev, cur in zip(ordered, ordered[1:]):
        if cur.target.start_byte < prev.target.end_byte:
            raise ContractViolation(
                f"overlapping edits at bytes {prev.target.start_byte}..{prev.target.end_byte}"
                f" and {cur.target.start_byte}..{cur.target.end_byte}"
            )
        if (
            cur.target.start_byte == prev.target.start_byte
            and cur.target.is_empty
            and prev.target.is_empty
        ):
            raise ContractViolation(
                f"two insertions at the same byte offset {cur.target.start_byte}"
            )
    return ordered


def apply_edits(text: SourceText, edits: list[Edit]) -> tuple[SourceText, LineMap]:
    """Apply non-overlapping edits in position order; return output text and line map.

    The line map covers every original line: unedited lines map to their
    shifted positions, and lines intersecting an edit are flagged and
    mapped to the output region their bytes landed in.
    """
    ordered = _validate_edits(text, edits)
    pieces: list[str] = []
    cursor = 0
    for e in ordered:
        pieces.append(text.slice_bytes(cursor, e.target.start_byte))
        pieces.append(e.replacement)
        cursor = e.target.end_byte
    pieces.append(text.slice_bytes(cursor, text.byte_len))
    output = SourceText("".join(pieces))

    # Cumulative byte deltas at each edit boundary, for mapping unedited bytes.
    starts = [e.target.start_byte for e in ordered]
    ends = [e.target.end_byte for e in ordered]
    repl_lens = [len(e.replacement.encode("utf-8")) for e in ordered]
    deltas = [0] * (len(ordered) + 1)
    for i, e in enumerate(ordered):
        deltas[i + 1] = deltas[i] + repl_lens[i] - (ends[i] - starts[i])

    def out_byte(b: int) -> int:
        """Output offset of original byte b; bytes inside an edit collapse to its start."""
        i = bisect_right(ends, b)
        if i < len(ordered) and starts[i] <= b:
            # b lies inside edit i (or at the start of an insertion there).
            return starts[i] + deltas[i]
        if i > 0 and b < ends[i - 1]:
            return starts[i - 1] + deltas[i - 1]
        return b + deltas[i]

    entries: list[LineEntry] = []
    for line in range(1, text.num_lines + 1):
        ls = text.line_start(line)
        ee = text.line_extent_end(line)
        touching = [e for e in ordered if _edit_touches_line(e, text, line)]
        if not touching:
            new_line = output.line_of_byte(min(out_byte(ls), output.byte_len))
            entries.append(LineEntry(line, new_line, new_line, False, False))
            continue
        deleted = any(
            e.target.start_byte <= ls and e.target.end_byte >= ee and e.replacement == ""
            for e in touching
        )
        lo = min(out_byte(ls), output.byte_len)
        hi = min(out_byte(max(ls, ee - 1)), output.byte_len)
        new_start = output.line_of_byte(lo)
        new_end = max(new_start, output.line_of_byte(hi))
        entries.append(LineEntry(line, new_start, new_end, True, deleted))

    return output, LineMap(tuple(entries), text)

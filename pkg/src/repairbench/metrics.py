"""Execution-based and similarity-based evaluation metrics.

pass@k is implemented in two readings that the literature conflates:

* any-of-first-k: the fraction of bugs whose first k sampled patches
  contain at least one pass. Exact for n == k; for n > k it needs the
  per-sample outcome order.
* unbiased estimator: mean over bugs of 1 - C(n-c, k)/C(n, k), computed
  in the overflow-safe product form.

Both are reported side by side because published tables are not always
expressible under the first reading.

The similarity score is a documented CodeBLEU subset: token 4-gram BLEU,
keyword-weighted 4-gram BLEU (keywords weigh 5x), and a height-limited
syntax-subtree match. The dataflow component is deliberately out of
scope.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass

from . import javalex
from .errors import ContractViolation, MetricError
from .javaparse import Node, parse_source
from .sourcetext import SourceText

NGRAM_ORDER = 4
KEYWORD_WEIGHT = 5.0
SUBTREE_MAX_DEPTH = 3
DEFAULT_WEIGHTS = (1 / 3, 1 / 3, 1 / 3)


@dataclass(frozen=True)
class SampleStats:
    """Per-bug patch sampling outcome: n generated, c passing.

    ``outcomes`` optionally records the per-sample pass/fail order, which
    the any-of-first-k reading needs whenever k < n.
    """

    n: int
    c: int
    outcomes: tuple[bool, ...] | None = None

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ContractViolation("n must be at least 1")
        if not 0 <= self.c <= self.n:
            raise ContractViolation(f"c={self.c} outside 0..{self.n}")
        if self.outcomes is not None:
            if len(self.outcomes) != self.n:
                raise ContractViolation("outcomes length must equal n")
            if sum(self.outcomes) != self.c:
                raise ContractViolation("outcomes disagree with c")


@dataclass(frozen=True)
class EvalRow:
    """One (model, transformation) row of a robustness report."""

    model: str
    kind: str
    pass_orig: float
    pass_trans: float
    codebleu_orig: float
    codebleu_trans: float
    change: float | None
    direction: str
    instances: int = 0


def pass_at_k_any(per_bug: list[SampleStats], k: int) -> float:
    """Percent of bugs with at least one pass among the first k samples."""
    if not per_bug:
        raise MetricError("pass@k over an empty bug list is undefined")
    hits = 0
    for stats in per_bug:
        if k > stats.n:
            raise ContractViolation(f"k={k} exceeds n={stats.n}")
        if k == stats.n:
            hits += stats.c >= 1
        else:
            if stats.outcomes is None:
                raise ContractViolation(
                    "any-of-first-k with k < n needs per-sample outcomes"
                )
            hits += any(stats.outcomes[:k])
    return 100.0 * hits / len(per_bug)


def pass_at_k_unbiased(per_bug: list[SampleStats], k: int) -> float:
    """Mean over bugs of 1 - C(n-c, k)/C(n, k), as a percent."""
    if not per_bug:
        raise MetricError("pass@k over an empty bug list is undefined")
    total = 0.0
    for stats in per_bug:
        total += unbiased_term(stats.n, stats.c, k)
    return 100.0 * total / len(per_bug)


def unbiased_term(n: int, c: int, k: int) -> float:
    """Single-bug unbiased pass@k, product form."""
    if k > n:
        raise ContractViolation(f"k={k} exceeds n={n}")
    if c == 0:
        return 0.0
    if n - c < k:
        return 1.0
    prod = 1.0
    for i in range(k):
        prod *= (n - c - i) / (n - i)
    return 1.0 - prod


def relative_change(orig: float, trans: float) -> tuple[float | None, str]:
    """Percent change relative to the original score, with direction.

    Matches published-table arithmetic: 100 * |trans - orig| / orig,
    rounded to two decimals. A zero original with a nonzero transformed
    score yields (None, direction): undefined rather than a crash.
    """
    if trans > orig:
        direction = "up"
    elif trans < orig:
        direction = "down"
    else:
        direction = "none"
    if orig == 0:
        return (0.0, "none") if trans == 0 else (None, direction)
    return round(100.0 * abs(trans - orig) / orig, 2), direction


# ----------------------------------------------------------------------
# CodeBLEU subset
# ----------------------------------------------------------------------


def _tokenize(source: SourceText) -> list[str]:
    tokens, errors = javalex.tokenize(source.content)
    if errors:
        raise MetricError("untokenizable input: " + errors[0])
    return [t.text for t in tokens if not t.is_trivia]


def _ngram_counts(tokens: list[str], n: int) -> Counter:
    return Counter(tuple(tokens[i : i + n]) for i in range(len(tokens) - n + 1))


def _modified_precision(
    ref: Counter, hyp: Counter, weight_fn=None
) -> tuple[float, float]:
    """(clipped matches, total) with optional per-ngram weights."""
    matches = 0.0
    total = 0.0
    for gram, count in hyp.items():
        w = weight_fn(gram) if weight_fn is not None else 1.0
        total += w * count
        matches += w * min(count, ref.get(gram, 0))
    return matches, total


def _bleu(ref_tokens: list[str], hyp_tokens: list[str], weight_fn=None) -> float:
    if not hyp_tokens:
        return 0.0
    log_sum = 0.0
    orders = 0
    for n in range(1, NGRAM_ORDER + 1):
        hyp_counts = _ngram_counts(hyp_tokens, n)
        if not hyp_counts:
            continue
        ref_counts = _ngram_counts(ref_tokens, n)
        matches, total = _modified_precision(ref_counts, hyp_counts, weight_fn)
        if matches == 0.0:
            # Add-one smoothing on zero counts keeps the log finite.
            matches, total = matches + 1.0, total + 1.0
        log_sum += math.log(matches / total)
        orders += 1
    if orders == 0:
        return 0.0
    precision = math.exp(log_sum / orders)
    ref_len, hyp_len = len(ref_tokens), len(hyp_tokens)
    bp = 1.0 if hyp_len >= ref_len else math.exp(1.0 - ref_len / hyp_len)
    return bp * precision


def _keyword_weight(gram: tuple[str, ...]) -> float:
    return KEYWORD_WEIGHT if any(t in javalex.KEYWORDS for t in gram) else 1.0


def _subtree_label(node: Node) -> str:
    if node.token is None:
        return node.kind
    if node.token.kind in (javalex.KEYWORD, javalex.OPERATOR, javalex.PUNCT):
        return f"{node.token.kind}:{node.token.text}"
    return node.token.kind  # identifier and literal spellings are abstracted


def _serialize(node: Node) -> str:
    children = [c for c in node.children if not c.is_trivia]
    if not children:
        return _subtree_label(node)
    inner = ",".join(_serialize(c) for c in children)
    return f"{_subtree_label(node)}({inner})"


def _subtree_multiset(source: SourceText) -> Counter:
    """Complete subtrees of height <= SUBTREE_MAX_DEPTH, leaves abstracted."""
    tree = parse_source(source.content)
    counts: Counter = Counter()

    def visit(node: Node) -> int:
        children = [c for c in node.children if not c.is_trivia]
        if not children:
            return 1
        height = 1 + max(visit(c) for c in children)
        if height <= SUBTREE_MAX_DEPTH:
            counts[_serialize(node)] += 1
        return height

    visit(tree.root)
    return counts


def _ast_match(reference: SourceText, hypothesis: SourceText) -> float:
    ref = _subtree_multiset(reference)
    if not ref:
        return 1.0
    hyp = _subtree_multiset(hypothesis)
    matched = sum(min(count, hyp.get(key, 0)) for key, count in ref.items())
    return matched / sum(ref.values())


def codebleu_subset(
    reference: SourceText,
    hypothesis: SourceText,
    weights: tuple[float, float, float] = DEFAULT_WEIGHTS,
) -> float:
    """Weighted sum of 4-gram BLEU, keyword-weighted BLEU, and subtree match.

    Weights must be nonnegative and sum to 1. Untokenizable input raises
    MetricError; callers exclude such pairs from averages and log them.
    """
    if len(weights) != 3 or any(w < 0 for w in weights):
        raise ContractViolation("weights must be three nonnegative numbers")
    if abs(sum(weights) - 1.0) > 1e-9:
        raise ContractViolation(f"weights must sum to 1, got {sum(weights)}")
    ref_tokens = _tokenize(reference)
    hyp_tokens = _tokenize(hypothesis)
    if not ref_tokens and not hyp_tokens:
        return 1.0
    w_ngram, w_weighted, w_ast = weights
    score = (
        w_ngram * _bleu(ref_tokens, hyp_tokens)
        + w_weighted * _bleu(ref_tokens, hyp_tokens, _keyword_weight)
        + w_ast * _ast_match(reference, hypothesis)
    )
    return min(max(score, 0.0), 1.0)

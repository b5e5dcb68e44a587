"""Corpus-level BLEU with mteval-13a tokenization, 4-gram precision,
exponential smoothing of zero counts, and brevity penalty. Used only as an
overall-quality control next to the contrastive accuracy numbers.
"""

from __future__ import annotations

import math
import re
from collections import Counter
from dataclasses import dataclass

from .errors import UsageError

MAX_ORDER = 4

_13A_RULES = [
    (re.compile(r"<skipped>"), ""),
    (re.compile(r"-\n"), ""),
    (re.compile(r"\n"), " "),
    (re.compile(r"&quot;"), '"'),
    (re.compile(r"&amp;"), "&"),
    (re.compile(r"&lt;"), "<"),
    (re.compile(r"&gt;"), ">"),
]
_13A_PUNCT = re.compile(r"([\{-\~\[-\` -\&\(-\+\:-\@\/])")
_13A_PERIOD_BEFORE = re.compile(r"([^0-9])([\.,])")
_13A_PERIOD_AFTER = re.compile(r"([\.,])([^0-9])")
_13A_DASH = re.compile(r"([0-9])(-)")


def tokenize_13a(line: str) -> list[str]:
    for pattern, repl in _13A_RULES:
        line = pattern.sub(repl, line)
    line = f" {line} "
    line = _13A_PUNCT.sub(r" \1 ", line)
    line = _13A_PERIOD_BEFORE.sub(r"\1 \2 ", line)
    line = _13A_PERIOD_AFTER.sub(r" \1 \2", line)
    line = _13A_DASH.sub(r"\1 \2 ", line)
    return line.split()


def _ngrams(tokens, max_order=MAX_ORDER) -> Counter:
    grams = Counter()
    for n in range(1, max_order + 1):
        for i in range(len(tokens) - n + 1):
            grams[tuple(tokens[i : i + n])] += 1
    return grams


@dataclass
class BleuResult:
    score: float
    precisions: list[float]
    brevity_penalty: float
    sys_len: int
    ref_len: int


def corpus_bleu(hypotheses, references, lowercase=False) -> BleuResult:
    """Single-reference corpus BLEU over raw (untokenized) segments."""
    if len(hypotheses) != len(references):
        raise UsageError(
            f"{len(hypotheses)} hypotheses vs {len(references)} references"
        )
    correct = [0] * MAX_ORDER
    total = [0] * MAX_ORDER
    sys_len = 0
    ref_len = 0
    for hyp, ref in zip(hypotheses, references):
        if lowercase:
            hyp, ref = hyp.lower(), ref.lower()
        hyp_tokens = tokenize_13a(hyp.rstrip())
        ref_tokens = tokenize_13a(ref.rstrip())
        sys_len += len(hyp_tokens)
        ref_len += len(ref_tokens)
        ref_grams = _ngrams(ref_tokens)
        for gram, count in _ngrams(hyp_tokens).items():
            n = len(gram)
            correct[n - 1] += min(count, ref_grams.get(gram, 0))
            total[n - 1] += count

    precisions = [0.0] * MAX_ORDER
    smooth = 1.0
    # effective order: segments shorter than MAX_ORDER tokens contribute no
    # higher-order statistics; identity then still scores 100
    effective_order = 0
    for n in range(1, MAX_ORDER + 1):
        if total[n - 1] == 0:
            break
        effective_order = n
        if correct[n - 1] == 0:
            smooth *= 2.0
            precisions[n - 1] = 100.0 / (smooth * total[n - 1])
        else:
            precisions[n - 1] = 100.0 * correct[n - 1] / total[n - 1]

    if sys_len == 0 or effective_order == 0:
        return BleuResult(0.0, precisions, 0.0, sys_len, ref_len)
    bp = 1.0 if sys_len >= ref_len else math.exp(1 - ref_len / sys_len)
    log_sum = sum(
        math.log(p) if p > 0.0 else -9999999999.0
        for p in precisions[:effective_order]
    )
    score = bp * math.exp(log_sum / effective_order)
    return BleuResult(score, precisions, bp, sys_len, ref_len)


def compute_bleu(hypotheses, references, cased: bool = True) -> float:
    """BLEU in [0, 100]; uncased mode lowercases both sides first."""
    return corpus_bleu(hypotheses, references, lowercase=not cased).score

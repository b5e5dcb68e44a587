"""Contrastive scoring harness: drive a scorer over a test set, apply the
decision rule, and aggregate accuracy by pronoun, antecedent distance, and
antecedent location.

A decision is correct only when the reference translation outscores every
contrastive variant strictly; ties count as incorrect.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass

from .bleu import compute_bleu  # re-exported: part of this module's surface
from .errors import ProtocolError, UsageError
from .protocol import ScoreRequest, ScoreResponse
from .testgen import DISTANCE_BUCKETS, PRONOUN_CLASSES, TestSet, distance_bucket

__all__ = [
    "ScoreRequest", "ScoreResponse", "Decision", "EvaluationReport",
    "score_batch", "judge", "aggregate", "builtin_scorer", "compute_bleu",
    "build_requests", "evaluate_testset",
]

LOCATIONS = ("intrasegmental", "external")


@dataclass(frozen=True)
class Decision:
    example_id: str
    correct: bool
    margin: float  # reference logprob minus best contrastive logprob

    def __post_init__(self):
        if self.correct != (self.margin > 0):
            raise UsageError(
                f"{self.example_id}: correct={self.correct} contradicts "
                f"margin={self.margin}"
            )


@dataclass
class EvaluationReport:
    total_accuracy: float
    n: int
    by_pronoun: dict  # class -> accuracy
    by_distance: dict  # bucket -> accuracy
    by_location: dict  # intrasegmental/external -> accuracy
    counts_by_pronoun: dict
    counts_by_distance: dict
    counts_by_location: dict
    decisions: list[Decision]
    scorer: str = ""

    def to_json_dict(self) -> dict:
        return {
            "scorer": self.scorer,
            "n": self.n,
            "total_accuracy": self.total_accuracy,
            "by_pronoun": self.by_pronoun,
            "by_distance": self.by_distance,
            "by_location": self.by_location,
            "counts_by_pronoun": self.counts_by_pronoun,
            "counts_by_distance": self.counts_by_distance,
            "counts_by_location": self.counts_by_location,
            "decisions": [
                {"id": d.example_id, "correct": d.correct, "margin": d.margin}
                for d in self.decisions
            ],
        }


def build_requests(example, context_depth: int | None = None) -> list[ScoreRequest]:
    """One request for the reference and one per contrastive variant.
    `context_depth` truncates the stored context (never extends it)."""
    src_ctx = list(example.src_context)
    tgt_ctx = list(example.ref_context)
    if context_depth is not None:
        if context_depth < 0:
            raise UsageError(f"context depth must be >= 0, got {context_depth}")
        src_ctx = src_ctx[len(src_ctx) - min(context_depth, len(src_ctx)):]
        tgt_ctx = tgt_ctx[len(tgt_ctx) - min(context_depth, len(tgt_ctx)):]
    requests = [
        ScoreRequest(
            f"{example.example_id}#ref", tuple(src_ctx), example.src_sentence,
            tuple(tgt_ctx), example.ref_sentence,
        )
    ]
    for i, variant in enumerate(example.contrastive):
        requests.append(
            ScoreRequest(
                f"{example.example_id}#c{i}", tuple(src_ctx),
                example.src_sentence, tuple(tgt_ctx), variant.tgt,
            )
        )
    return requests


def score_batch(scorer, requests) -> list[ScoreResponse]:
    """Runs a request batch through a scorer, enforcing the one-response-
    per-request contract."""
    if not requests:
        raise UsageError("empty request batch")
    ids = [r.id for r in requests]
    if len(set(ids)) != len(ids):
        raise UsageError("duplicate request ids in batch")
    responses = scorer.score(requests)
    got = {}
    for resp in responses:
        if resp.id in got:
            raise ProtocolError(f"duplicate response id {resp.id!r}")
        got[resp.id] = resp
    missing = [i for i in ids if i not in got]
    if missing or len(responses) != len(requests):
        raise ProtocolError(
            f"{len(responses)} responses for {len(requests)} requests; "
            f"missing ids: {missing[:5]}"
        )
    return [got[i] for i in ids]


def judge(example, scores: dict) -> Decision:
    """`scores` maps request id (ref + variants of this example) to
    canonical logprob. Correct iff the reference strictly outscores every
    variant."""
    ref_id = f"{example.example_id}#ref"
    if ref_id not in scores:
        raise UsageError(f"missing reference score for {example.example_id}")
    variant_ids = [f"{example.example_id}#c{i}" for i in range(len(example.contrastive))]
    for vid in variant_ids:
        if vid not in scores:
            raise UsageError(f"missing variant score {vid}")
    ref = scores[ref_id]
    best_variant = max(scores[v] for v in variant_ids)
    margin = ref - best_variant
    return Decision(example.example_id, margin > 0, margin)


def aggregate(decisions, testset: TestSet, scorer_name: str = "") -> EvaluationReport:
    """Accuracies per cell; location is intrasegmental for distance 0 and
    external for distance >= 1. Decisions must cover the test set exactly
    once."""
    by_id = {}
    for d in decisions:
        if d.example_id in by_id:
            raise UsageError(f"duplicate decision for {d.example_id}")
        by_id[d.example_id] = d
    example_ids = {ex.example_id for ex in testset.examples}
    if set(by_id) != example_ids:
        missing = sorted(example_ids - set(by_id))[:5]
        extra = sorted(set(by_id) - example_ids)[:5]
        raise UsageError(
            f"decisions do not cover the test set exactly once "
            f"(missing {missing}, extra {extra})"
        )

    correct = defaultdict(int)
    count = defaultdict(int)
    for ex in testset.examples:
        d = by_id[ex.example_id]
        cls = ex.candidate.ref_pronoun_class
        bucket = distance_bucket(ex.candidate.ante_distance)
        location = "intrasegmental" if ex.candidate.ante_distance == 0 else "external"
        for key in (("total",), ("pron", cls), ("dist", bucket), ("loc", location)):
            count[key] += 1
            if d.correct:
                correct[key] += 1

    def acc(key):
        return correct[key] / count[key] if count[key] else 0.0

    return EvaluationReport(
        total_accuracy=acc(("total",)),
        n=count[("total",)],
        by_pronoun={c: acc(("pron", c)) for c in PRONOUN_CLASSES if count[("pron", c)]},
        by_distance={b: acc(("dist", b)) for b in DISTANCE_BUCKETS if count[("dist", b)]},
        by_location={l: acc(("loc", l)) for l in LOCATIONS if count[("loc", l)]},
        counts_by_pronoun={c: count[("pron", c)] for c in PRONOUN_CLASSES},
        counts_by_distance={b: count[("dist", b)] for b in DISTANCE_BUCKETS},
        counts_by_location={l: count[("loc", l)] for l in LOCATIONS},
        decisions=[by_id[ex.example_id] for ex in testset.examples],
        scorer=scorer_name,
    )


def evaluate_testset(scorer, testset: TestSet, context_depth: int | None = None) -> EvaluationReport:
    """Scores every example and aggregates. Requests are sent in test-set
    order, reference first, then the variants."""
    if not testset.examples:
        raise UsageError("test set is empty")
    requests = []
    for ex in testset.examples:
        requests.extend(build_requests(ex, context_depth))
    responses = score_batch(scorer, requests)
    scores = {r.id: r.logprob for r in responses}
    decisions = [judge(ex, scores) for ex in testset.examples]
    return aggregate(decisions, testset, getattr(scorer, "name", ""))


def builtin_scorer(kind: str, config=None, testset=None):
    from . import scorers

    return scorers.builtin_scorer(kind, config, testset=testset)

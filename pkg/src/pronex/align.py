"""Lexical translation models trained with EM, directional Viterbi word
alignment with a diagonal position prior, symmetrization heuristics, and
per-word alignment frequency statistics.

Model family: a target token picks a source position (or NULL) and emits
a target word from the source word's lexical distribution. The baseline
model uses a uniform position prior; the refined model reweights positions
by exp(-tension * |i/m - j/n|) with a reserved NULL mass.
"""

from __future__ import annotations

import math
from collections import Counter, defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .corpus import ParallelCorpus
from .errors import UsageError, ValidationError

NULL_WORD = "<NULL>"

# Lexical probability assumed for (source word, target word) pairs never
# seen in training; low enough that a trained NULL entry wins.
FLOOR_PROB = 1e-12

DEFAULT_TENSION = 4.0
DEFAULT_NULL_PROB = 0.08

HEURISTICS = ("intersection", "union", "grow-diag-final-and")


@dataclass
class LexTable:
    """p(target word | source word); every row sums to 1."""

    probabilities: dict[str, dict[str, float]]

    def prob(self, src: str, tgt: str) -> float:
        return self.probabilities.get(src, {}).get(tgt, FLOOR_PROB)

    def check_normalized(self, tol: float = 1e-6):
        for src, row in self.probabilities.items():
            total = sum(row.values())
            if abs(total - 1.0) > tol:
                raise ValidationError(
                    f"distribution for {src!r} sums to {total}, not 1"
                )
            if any(p < 0 for p in row.values()):
                raise ValidationError(f"negative probability under {src!r}")


@dataclass(frozen=True)
class DiagAlignModel:
    lex: LexTable
    tension: float = DEFAULT_TENSION
    null_prob: float = DEFAULT_NULL_PROB

    def __post_init__(self):
        if self.tension <= 0:
            raise UsageError(f"tension must be positive, got {self.tension}")
        if not 0 <= self.null_prob < 1:
            raise UsageError(f"null_prob must be in [0, 1), got {self.null_prob}")


@dataclass(frozen=True)
class Alignment:
    links: frozenset[tuple[int, int]] = field(default_factory=frozenset)

    @classmethod
    def of(cls, *links) -> "Alignment":
        return cls(frozenset(links))

    def __contains__(self, link):
        return link in self.links

    def __len__(self):
        return len(self.links)

    def sorted_links(self) -> list[tuple[int, int]]:
        return sorted(self.links)


def _pairs_as_surfaces(corpus: ParallelCorpus) -> list[tuple[list[str], list[str]]]:
    return [
        (src.surfaces(), tgt.surfaces()) for _, _, src, tgt in corpus.iter_pairs()
    ]


def _uniform_init(pairs) -> LexTable:
    cooc = defaultdict(set)
    for src_words, tgt_words in pairs:
        for t in tgt_words:
            cooc[NULL_WORD].add(t)
            for s in src_words:
                cooc[s].add(t)
    table = {
        s: {t: 1.0 / len(ts) for t in sorted(ts)} for s, ts in cooc.items()
    }
    return LexTable(table)


def _position_priors(n_src: int, n_tgt: int, tension, null_prob):
    """Returns (null weight, priors[i][j]) for target position i over source
    positions j. `tension is None` selects the uniform baseline, where NULL
    competes as one extra position (weight 1/(n+1) everywhere)."""
    if tension is None:
        w = 1.0 / (n_src + 1)
        return w, [[w] * n_src for _ in range(n_tgt)]
    priors = []
    for i in range(n_tgt):
        weights = [
            math.exp(-tension * abs((i + 1) / n_tgt - (j + 1) / n_src))
            for j in range(n_src)
        ]
        z = sum(weights)
        priors.append([(1.0 - null_prob) * w / z for w in weights])
    return null_prob, priors


def _estep_chunk(args):
    pairs, table_probs, tension, null_prob = args
    table = LexTable(table_probs)
    counts = defaultdict(Counter)
    loglik = 0.0
    for src_words, tgt_words in pairs:
        null_w, priors = _position_priors(
            len(src_words), len(tgt_words), tension, null_prob
        )
        for i, t in enumerate(tgt_words):
            scores = [null_w * table.prob(NULL_WORD, t)]
            scores += [
                priors[i][j] * table.prob(s, t) for j, s in enumerate(src_words)
            ]
            z = sum(scores)
            loglik += math.log(z) if z > 0 else math.log(FLOOR_PROB)
            if z <= 0:
                continue
            counts[NULL_WORD][t] += scores[0] / z
            for j, s in enumerate(src_words):
                counts[s][t] += scores[j + 1] / z
    return counts, loglik


def _run_em(pairs, init: LexTable, iterations, tension, null_prob, jobs=1) -> LexTable:
    table = init
    for _ in range(iterations):
        merged = defaultdict(Counter)
        if jobs <= 1 or len(pairs) < 2 * jobs:
            chunk_results = [_estep_chunk((pairs, table.probabilities, tension, null_prob))]
        else:
            step = (len(pairs) + jobs - 1) // jobs
            chunks = [pairs[k : k + step] for k in range(0, len(pairs), step)]
            with ProcessPoolExecutor(max_workers=jobs) as pool:
                chunk_results = list(
                    pool.map(
                        _estep_chunk,
                        [(c, table.probabilities, tension, null_prob) for c in chunks],
                    )
                )
        # merge partial tables in fixed chunk order so results do not depend
        # on worker scheduling
        for counts, _ in chunk_results:
            for s, row in counts.items():
                merged[s].update(row)
        table = LexTable(
            {
                s: {t: c / total for t, c in sorted(row.items())}
                for s, row in merged.items()
                if (total := sum(row.values())) > 0
            }
        )
    return table


def train_ibm1(corpus: ParallelCorpus, iterations: int, jobs: int = 1) -> LexTable:
    """EM for the uniform-prior lexical model. Corpus log-likelihood is
    non-decreasing across iterations."""
    if iterations < 1:
        raise UsageError(f"iterations must be >= 1, got {iterations}")
    pairs = _pairs_as_surfaces(corpus)
    if not pairs:
        raise UsageError("cannot train on an empty corpus")
    init = _uniform_init(pairs)
    return _run_em(pairs, init, iterations, None, None, jobs)


def train_diag(
    corpus: ParallelCorpus,
    init: LexTable,
    iterations: int,
    tension: float = DEFAULT_TENSION,
    null_prob: float = DEFAULT_NULL_PROB,
    jobs: int = 1,
) -> DiagAlignModel:
    """Re-estimates the lexical table under the diagonal position prior;
    tension and null mass stay fixed."""
    if iterations < 1:
        raise UsageError(f"iterations must be >= 1, got {iterations}")
    pairs = _pairs_as_surfaces(corpus)
    if not pairs:
        raise UsageError("cannot train on an empty corpus")
    init.check_normalized()
    lex = _run_em(pairs, init, iterations, tension, null_prob, jobs)
    return DiagAlignModel(lex, tension, null_prob)


def log_likelihood(corpus: ParallelCorpus, model) -> float:
    """Corpus log-likelihood; accepts a LexTable (uniform prior) or a
    DiagAlignModel."""
    pairs = _pairs_as_surfaces(corpus)
    if isinstance(model, DiagAlignModel):
        _, ll = _estep_chunk((pairs, model.lex.probabilities, model.tension, model.null_prob))
    else:
        _, ll = _estep_chunk((pairs, model.probabilities, None, None))
    return ll


def viterbi_align(model: DiagAlignModel, pair, direction: str = "fwd") -> Alignment:
    """Links each conditioned-side token to its best position on the other
    side, or to NULL (no link). `fwd` conditions target tokens on source
    positions; `rev` expects a model trained on the swapped corpus and
    conditions source tokens on target positions. Links are always
    (src_index, tgt_index). Ties go to the smaller position; a tie with
    NULL stays NULL.
    """
    src_sent, tgt_sent = pair
    if len(src_sent) == 0 or len(tgt_sent) == 0:
        raise UsageError("cannot align an empty sentence")
    if direction == "fwd":
        cond_words = [t.surface for t in tgt_sent.tokens]
        given_words = [t.surface for t in src_sent.tokens]
    elif direction == "rev":
        cond_words = [t.surface for t in src_sent.tokens]
        given_words = [t.surface for t in tgt_sent.tokens]
    else:
        raise UsageError(f"direction must be 'fwd' or 'rev', got {direction!r}")

    null_w, priors = _position_priors(
        len(given_words), len(cond_words), model.tension, model.null_prob
    )
    links = set()
    for i, w in enumerate(cond_words):
        best_j, best_score = None, null_w * model.lex.prob(NULL_WORD, w)
        for j, g in enumerate(given_words):
            score = priors[i][j] * model.lex.prob(g, w)
            if score > best_score:
                best_j, best_score = j, score
        if best_j is not None:
            links.add((best_j, i) if direction == "fwd" else (i, best_j))
    return Alignment(frozenset(links))


def _grow_diag_final_and(fwd: Alignment, rev: Alignment) -> frozenset:
    inter = fwd.links & rev.links
    union = fwd.links | rev.links
    if not union:
        return frozenset()
    max_s = max(s for s, _ in union)
    max_t = max(t for _, t in union)
    neighbors = [(-1, 0), (0, -1), (1, 0), (0, 1), (-1, -1), (-1, 1), (1, -1), (1, 1)]

    links = set(inter)
    aligned_s = {s for s, _ in links}
    aligned_t = {t for _, t in links}

    changed = True
    while changed:
        changed = False
        for s in range(max_s + 1):
            for t in range(max_t + 1):
                if (s, t) not in links:
                    continue
                for ds, dt in neighbors:
                    cand = (s + ds, t + dt)
                    if cand in links or cand not in union:
                        continue
                    if cand[0] not in aligned_s or cand[1] not in aligned_t:
                        links.add(cand)
                        aligned_s.add(cand[0])
                        aligned_t.add(cand[1])
                        changed = True
    for directional in (fwd.links, rev.links):
        for cand in sorted(directional):
            if cand in links:
                continue
            # final-and: both endpoints must still be unaligned
            if cand[0] not in aligned_s and cand[1] not in aligned_t:
                links.add(cand)
                aligned_s.add(cand[0])
                aligned_t.add(cand[1])
    return frozenset(links)


def symmetrize(fwd: Alignment, rev: Alignment, heuristic: str = "grow-diag-final-and") -> Alignment:
    if heuristic == "intersection":
        return Alignment(fwd.links & rev.links)
    if heuristic == "union":
        return Alignment(fwd.links | rev.links)
    if heuristic == "grow-diag-final-and":
        return Alignment(_grow_diag_final_and(fwd, rev))
    raise UsageError(f"unknown symmetrization heuristic {heuristic!r}")


def train_alignment_models(
    corpus: ParallelCorpus,
    ibm1_iterations: int = 4,
    diag_iterations: int = 4,
    tension: float = DEFAULT_TENSION,
    null_prob: float = DEFAULT_NULL_PROB,
    jobs: int = 1,
) -> tuple[DiagAlignModel, DiagAlignModel]:
    """Trains the forward (p(tgt word|src word)) and reverse models."""
    from .corpus import ParallelDocument  # local to avoid widening the API

    rev_docs = tuple(
        ParallelDocument(d.doc_id, tuple((t, s) for s, t in d.pairs))
        for d in corpus.documents
    )
    rev_corpus = ParallelCorpus(rev_docs, corpus.synthetic_boundaries)
    fwd_model = train_diag(
        corpus, train_ibm1(corpus, ibm1_iterations, jobs), diag_iterations,
        tension, null_prob, jobs,
    )
    rev_model = train_diag(
        rev_corpus, train_ibm1(rev_corpus, ibm1_iterations, jobs), diag_iterations,
        tension, null_prob, jobs,
    )
    return fwd_model, rev_model


def decode_alignments(
    corpus: ParallelCorpus,
    fwd_model: DiagAlignModel,
    rev_model: DiagAlignModel,
    heuristic: str = "grow-diag-final-and",
) -> list[Alignment]:
    """Viterbi-aligns both directions and symmetrizes; one Alignment per
    sentence pair in corpus order."""
    out = []
    for _, _, src, tgt in corpus.iter_pairs():
        if len(src) == 0 or len(tgt) == 0:
            out.append(Alignment())
            continue
        fwd = viterbi_align(fwd_model, (src, tgt), "fwd")
        # the reverse model conditions source tokens on target positions
        rev = viterbi_align(rev_model, (src, tgt), "rev")
        out.append(symmetrize(fwd, rev, heuristic))
    return out


def align_corpus(
    corpus: ParallelCorpus,
    ibm1_iterations: int = 4,
    diag_iterations: int = 4,
    tension: float = DEFAULT_TENSION,
    null_prob: float = DEFAULT_NULL_PROB,
    heuristic: str = "grow-diag-final-and",
    jobs: int = 1,
) -> list[Alignment]:
    """End-to-end symmetric alignment: trains both directions, decodes, and
    symmetrizes."""
    fwd_model, rev_model = train_alignment_models(
        corpus, ibm1_iterations, diag_iterations, tension, null_prob, jobs
    )
    return decode_alignments(corpus, fwd_model, rev_model, heuristic)


@dataclass
class AlignmentStats:
    """How often a source word aligns to each target word."""

    word: str
    total_occurrences: int
    rows: list[tuple[str, int, float]]  # (target word, count, probability)


def alignment_stats(corpus: ParallelCorpus, alignments, src_word: str) -> AlignmentStats:
    """Counts aligned target words over all source-side occurrences of
    `src_word` (case-insensitive on the source side). An occurrence linked
    to several target tokens is counted once, for its lowest-index link;
    unaligned occurrences count toward the total only, so probabilities sum
    to at most 1.
    """
    pairs = list(corpus.iter_pairs())
    if len(alignments) != len(pairs):
        raise UsageError(
            f"{len(alignments)} alignments for {len(pairs)} sentence pairs"
        )
    want = src_word.lower()
    total = 0
    counts = Counter()
    for (_, _, src, tgt), alignment in zip(pairs, alignments):
        by_src = defaultdict(list)
        for s, t in alignment.links:
            by_src[s].append(t)
        for tok in src.tokens:
            if tok.surface.lower() != want:
                continue
            total += 1
            linked = by_src.get(tok.index)
            if linked:
                counts[tgt.tokens[min(linked)].surface] += 1
    rows = [
        (w, c, c / total)
        for w, c in sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))
    ]
    return AlignmentStats(src_word, total, rows)


def write_pharaoh(alignments, path):
    """One line per sentence pair; links as 'srcidx-tgtidx' separated by
    spaces."""
    with open(path, "w", encoding="utf-8") as fh:
        for alignment in alignments:
            fh.write(" ".join(f"{s}-{t}" for s, t in alignment.sorted_links()))
            fh.write("\n")


def read_pharaoh(path) -> list[Alignment]:
    out = []
    with open(path, encoding="utf-8") as fh:
        for ln, line in enumerate(fh, start=1):
            links = set()
            for part in line.split():
                try:
                    s, t = part.split("-")
                    links.add((int(s), int(t)))
                except ValueError as exc:
                    raise ValidationError(
                        f"{path}: line {ln}: bad link {part!r}"
                    ) from exc
            out.append(Alignment(frozenset(links)))
    return out


def save_lex_tsv(table: LexTable, path):
    with open(path, "w", encoding="utf-8") as fh:
        for src in sorted(table.probabilities):
            for tgt, p in sorted(table.probabilities[src].items()):
                fh.write(f"{src}\t{tgt}\t{p:.12g}\n")


def load_lex_tsv(path) -> LexTable:
    table = defaultdict(dict)
    with open(path, encoding="utf-8") as fh:
        for ln, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line:
                continue
            parts = line.split("\t")
            if len(parts) != 3:
                raise ValidationError(f"{path}: line {ln}: expected 3 columns")
            src, tgt, p = parts
            table[src][tgt] = float(p)
    return LexTable(dict(table))

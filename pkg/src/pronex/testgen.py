"""Candidate filtering, contrastive variant generation, balanced sampling,
and test-set serialization.

A candidate is a sentence pair where English "it" is translated by a German
third-person-singular pronoun, both pronouns sit in coreference chains, and
the chains' antecedent heads are word-aligned. Each candidate expands into
a reference plus two contrastive variants in which the pronoun (and any
chain-mate possessives) is swapped to a wrong gender.
"""

from __future__ import annotations

import json
import random
from collections import defaultdict
from dataclasses import dataclass

from .align import Alignment
from .annotate import (
    AnnotatedDocument,
    CorefChain,
    Mention,
    chain_antecedent,
    is_possessive_surface,
)
from .corpus import Sentence, context_window
from .errors import UsageError, ValidationError

PRONOUN_CLASSES = ("er", "sie", "es")
CLASS_GENDER = {"er": "masc", "sie": "fem", "es": "neut"}
GENDER_CLASS = {g: c for c, g in CLASS_GENDER.items()}
DISTANCE_BUCKETS = ("0", "1", "2", "3", ">3")


@dataclass(frozen=True)
class AntecedentRef:
    surface: str
    head: int
    sent_idx: int
    fallback: bool = False


@dataclass(frozen=True)
class CandidateExample:
    doc_id: str
    sent_idx: int
    src_pronoun_pos: int
    tgt_pronoun_pos: int
    ref_pronoun_class: str
    src_antecedent: AntecedentRef
    tgt_antecedent: AntecedentRef
    ante_distance: int
    tgt_antecedent_gender: str

    def __post_init__(self):
        if self.ref_pronoun_class not in PRONOUN_CLASSES:
            raise ValidationError(f"bad pronoun class {self.ref_pronoun_class!r}")
        if self.ante_distance < 0:
            raise ValidationError(f"negative antecedent distance {self.ante_distance}")

    @property
    def example_id(self) -> str:
        return f"{self.doc_id}:{self.sent_idx}:{self.tgt_pronoun_pos}"


@dataclass(frozen=True)
class ContrastiveVariant:
    tgt: str
    replaced: str


@dataclass(frozen=True)
class ContrastiveExample:
    candidate: CandidateExample
    src_sentence: str
    ref_sentence: str
    src_context: tuple[str, ...]
    ref_context: tuple[str, ...]
    contrastive: tuple[ContrastiveVariant, ContrastiveVariant]
    # set for imported / deserialized records whose id is not derivable
    id_override: str | None = None

    def __post_init__(self):
        classes = {v.replaced for v in self.contrastive}
        classes.add(self.candidate.ref_pronoun_class)
        if classes != set(PRONOUN_CLASSES):
            raise ValidationError(
                f"{self.candidate.example_id}: variant classes {classes} do not "
                "cover er/sie/es"
            )

    @property
    def example_id(self) -> str:
        return self.id_override or self.candidate.example_id


@dataclass
class TestSet:
    examples: list[ContrastiveExample]
    manifest: dict


def distance_bucket(distance: int) -> str:
    return str(distance) if distance <= 3 else ">3"


def antecedent_distance(candidate: CandidateExample) -> int:
    """Sentences between pronoun and recorded antecedent (0 = same
    sentence). For fallback antecedents this is the distance to the nearest
    chain mention that carries the fallback."""
    return candidate.sent_idx - candidate.tgt_antecedent.sent_idx


def _is_tps_pronoun(layer, pos: int, surface: str) -> bool:
    """Predicate-1 check for the German side: an er/sie/es surface tagged as
    a third-person-singular pronoun. Polite 'Sie' fails via its morph."""
    morph = layer.morph[pos]
    return (
        surface.lower() in PRONOUN_CLASSES
        and layer.pos[pos] in ("PPER", "PRP", "PRON")
        and morph.person == 3
        and morph.number == "sg"
    )


def _mention_at(chains, sent_idx: int, pos: int):
    """(chain, mention) whose mention covers token `pos`, or (None, None)."""
    for chain in chains:
        for m in chain.mentions:
            if m.sent_idx == sent_idx and m.start <= pos < m.end:
                return chain, m
    return None, None


def _resolve_antecedent(chain: CorefChain, mention: Mention):
    """Nearest preceding nominal; falls back to the nearest preceding chain
    mention of any kind (recorded with a fallback flag). None if the mention
    opens its chain."""
    nominal = chain_antecedent(chain, mention)
    if nominal is not None:
        return nominal, False
    best = None
    for m in chain.mentions:
        if m.key() >= mention.key():
            break
        best = m
    if best is None:
        return None, False
    return best, True


def _filter_chunk(args):
    docs, alignments = args
    return _filter_serial(docs, alignments)


def filter_candidates(docs, alignments, jobs: int = 1) -> list[CandidateExample]:
    """Applies the four extraction predicates to every sentence pair.

    `alignments` maps (doc_id, sent_idx) to an Alignment covering that pair.
    Emits one candidate per qualifying pronoun pair; pairs sharing a target
    pronoun keep only the lowest source position (ids must stay unique).
    With jobs > 1, documents are processed in parallel chunks and results
    are merged in document order, so output does not depend on scheduling.
    """
    docs = list(docs)
    if jobs <= 1 or len(docs) < 2 * jobs:
        return _filter_serial(docs, alignments)
    from concurrent.futures import ProcessPoolExecutor

    step = (len(docs) + jobs - 1) // jobs
    chunks = []
    for k in range(0, len(docs), step):
        chunk = docs[k : k + step]
        keys = {
            (d.doc.doc_id, idx) for d in chunk for idx in range(len(d.doc))
        }
        chunks.append((chunk, {k: v for k, v in alignments.items() if k in keys}))
    out = []
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        for part in pool.map(_filter_chunk, chunks):
            out.extend(part)
    return out


def _filter_serial(docs, alignments) -> list[CandidateExample]:
    out = []
    for adoc in docs:
        doc = adoc.doc
        for sent_idx in range(len(doc)):
            key = (doc.doc_id, sent_idx)
            if key not in alignments:
                raise UsageError(f"no alignment for pair {key}")
            alignment = alignments[key]
            src = doc.source(sent_idx)
            tgt = doc.target(sent_idx)
            src_layer = adoc.layer("src", sent_idx)
            tgt_layer = adoc.layer("tgt", sent_idx)

            taken_tgt = set()
            for src_tok in src.tokens:
                if src_tok.surface.lower() != "it":
                    continue
                if src_layer.pos[src_tok.index] not in ("PRP", "PPER", "PRON"):
                    continue
                for tgt_tok in tgt.tokens:
                    if not _is_tps_pronoun(tgt_layer, tgt_tok.index, tgt_tok.surface):
                        continue
                    # predicate 2: the pronouns are aligned to each other
                    if (src_tok.index, tgt_tok.index) not in alignment:
                        continue
                    candidate = _check_chains(
                        adoc, alignments, sent_idx, src_tok.index, tgt_tok.index,
                        tgt_tok.surface.lower(),
                    )
                    if candidate is None:
                        continue
                    if tgt_tok.index in taken_tgt:
                        continue
                    taken_tgt.add(tgt_tok.index)
                    out.append(candidate)
    return out


def _check_chains(adoc, alignments, sent_idx, src_pos, tgt_pos, tgt_class):
    """Predicates 3 and 4: chain membership and aligned antecedent heads.
    For it->es the target chain requirement is waived and the target
    antecedent is read off the source antecedent's alignment."""
    doc = adoc.doc
    src_chain, src_mention = _mention_at(adoc.src_chains, sent_idx, src_pos)
    if src_chain is None:
        return None
    src_ante, src_fallback = _resolve_antecedent(src_chain, src_mention)
    if src_ante is None:
        return None

    def surf(side, s_idx, t_idx):
        sent = doc.source(s_idx) if side == "src" else doc.target(s_idx)
        return sent.tokens[t_idx].surface

    ante_alignment = alignments[(doc.doc_id, src_ante.sent_idx)]

    if tgt_class == "es":
        # word-level alignment of the source antecedent head decides
        linked = sorted(
            t for s, t in ante_alignment.links if s == src_ante.head
        )
        if not linked:
            return None
        tgt_head = linked[0]
        tgt_ante = AntecedentRef(
            surf("tgt", src_ante.sent_idx, tgt_head), tgt_head,
            src_ante.sent_idx, src_fallback,
        )
        tgt_gender = adoc.layer("tgt", src_ante.sent_idx).morph[tgt_head].gender
    else:
        tgt_chain, tgt_mention = _mention_at(adoc.tgt_chains, sent_idx, tgt_pos)
        if tgt_chain is None:
            return None
        ante, tgt_fallback = _resolve_antecedent(tgt_chain, tgt_mention)
        if ante is None:
            return None
        if ante.sent_idx != src_ante.sent_idx:
            return None
        if (src_ante.head, ante.head) not in ante_alignment:
            return None
        tgt_ante = AntecedentRef(
            surf("tgt", ante.sent_idx, ante.head), ante.head, ante.sent_idx,
            src_fallback or tgt_fallback,
        )
        tgt_gender = adoc.layer("tgt", ante.sent_idx).morph[ante.head].gender
        if tgt_gender == "unknown" and not tgt_ante.fallback:
            tgt_gender = CLASS_GENDER[tgt_class]

    src_ante_ref = AntecedentRef(
        surf("src", src_ante.sent_idx, src_ante.head), src_ante.head,
        src_ante.sent_idx, src_fallback,
    )
    return CandidateExample(
        doc_id=doc.doc_id,
        sent_idx=sent_idx,
        src_pronoun_pos=src_pos,
        tgt_pronoun_pos=tgt_pos,
        ref_pronoun_class=tgt_class,
        src_antecedent=src_ante_ref,
        tgt_antecedent=tgt_ante,
        ante_distance=sent_idx - tgt_ante.sent_idx,
        tgt_antecedent_gender=tgt_gender,
    )


def _recase(old: str, new: str) -> str:
    if old.isupper() and len(old) > 1:
        return new.upper()
    if old[0].isupper():
        return new.capitalize()
    return new


def swap_pronoun(sentence: Sentence, pos: int, target_class: str) -> Sentence:
    """Replaces the er/sie/es token at `pos`, preserving its capitalization
    pattern. All other tokens stay byte-identical."""
    if target_class not in PRONOUN_CLASSES:
        raise UsageError(f"bad target class {target_class!r}")
    if not 0 <= pos < len(sentence):
        raise UsageError(f"position {pos} out of range")
    old = sentence.tokens[pos].surface
    if old.lower() not in PRONOUN_CLASSES:
        raise UsageError(f"token {old!r} at {pos} is not a swappable pronoun")
    surfaces = sentence.surfaces()
    surfaces[pos] = _recase(old, target_class)
    return Sentence.from_surfaces(surfaces, sentence.lang)


def _possessive_stem(new_gender: str) -> str:
    return "ihr" if new_gender == "fem" else "sein"


def repair_agreement(
    sentence: Sentence,
    tgt_chains,
    pronoun_pos: int,
    new_gender: str,
    sent_idx: int = 0,
) -> Sentence:
    """Remaps possessive pronouns coreferent with the swapped pronoun
    (sein- <-> ihr-), keeping the inflectional suffix and capitalization.
    Possessives in other chains are left alone."""
    chain, _ = _mention_at(tgt_chains, sent_idx, pronoun_pos)
    if chain is None:
        return sentence
    surfaces = sentence.surfaces()
    new_stem = _possessive_stem(new_gender)
    for m in chain.mentions:
        if m.sent_idx != sent_idx or m.head == pronoun_pos:
            continue
        surface = surfaces[m.head]
        if not is_possessive_surface(surface):
            continue
        low = surface.lower()
        old_stem = "ihr" if low.startswith("ihr") else "sein"
        suffix = low[len(old_stem):]
        surfaces[m.head] = _recase(surface, new_stem + suffix)
    return Sentence.from_surfaces(surfaces, sentence.lang)


def generate_contrastive(candidate: CandidateExample, docs_by_id) -> ContrastiveExample:
    """Builds the reference plus the two wrong-pronoun variants, with
    context back to the antecedent (at least one preceding sentence)."""
    adoc = docs_by_id[candidate.doc_id]
    doc = adoc.doc
    sent_idx = candidate.sent_idx
    src = doc.source(sent_idx)
    tgt = doc.target(sent_idx)

    depth = max(1, candidate.ante_distance)
    src_context = tuple(
        s.text() for s in context_window(doc, sent_idx, depth, "source")
    )
    ref_context = tuple(
        s.text() for s in context_window(doc, sent_idx, depth, "target")
    )

    variants = []
    for cls in PRONOUN_CLASSES:
        if cls == candidate.ref_pronoun_class:
            continue
        swapped = swap_pronoun(tgt, candidate.tgt_pronoun_pos, cls)
        repaired = repair_agreement(
            swapped, adoc.tgt_chains, candidate.tgt_pronoun_pos,
            CLASS_GENDER[cls], sent_idx,
        )
        variants.append(ContrastiveVariant(repaired.text(), cls))

    return ContrastiveExample(
        candidate=candidate,
        src_sentence=src.text(),
        ref_sentence=tgt.text(),
        src_context=src_context,
        ref_context=ref_context,
        contrastive=(variants[0], variants[1]),
    )


def balance_sample(
    candidates,
    n_per_class: int,
    seed: int,
    docs_by_id=None,
    source_corpus: str = "unnamed",
) -> TestSet:
    """Uniform per-class sampling without replacement with a seeded
    generator. Distance distribution is left as-is. Output order is stable:
    by class, then document, then sentence."""
    if n_per_class < 0:
        raise UsageError(f"n_per_class must be >= 0, got {n_per_class}")
    by_class = defaultdict(list)
    for cand in candidates:
        by_class[cand.ref_pronoun_class].append(cand)

    rng = random.Random(seed)
    chosen = []
    for cls in PRONOUN_CLASSES:
        pool = sorted(
            by_class.get(cls, ()),
            key=lambda c: (c.doc_id, c.sent_idx, c.tgt_pronoun_pos),
        )
        if len(pool) < n_per_class:
            raise UsageError(
                f"class {cls!r} has {len(pool)} candidates, "
                f"{n_per_class - len(pool)} short of {n_per_class}"
            )
        chosen.extend(rng.sample(pool, n_per_class))

    chosen.sort(
        key=lambda c: (c.ref_pronoun_class, c.doc_id, c.sent_idx, c.tgt_pronoun_pos)
    )
    if docs_by_id is None and chosen:
        raise UsageError("balance_sample needs the annotated documents")
    examples = [generate_contrastive(c, docs_by_id) for c in chosen]

    seen = set()
    for ex in examples:
        if ex.example_id in seen:
            raise ValidationError(f"duplicate example id {ex.example_id}")
        seen.add(ex.example_id)

    counts = defaultdict(int)
    for ex in examples:
        counts[ex.candidate.ref_pronoun_class] += 1
    manifest = {
        "n_per_class": n_per_class,
        "seed": seed,
        "source_corpus": source_corpus,
        "counts": {cls: counts.get(cls, 0) for cls in PRONOUN_CLASSES},
        "total": len(examples),
    }
    return TestSet(examples, manifest)


@dataclass
class TestSetStats:
    """class x antecedent-distance bucket counts."""

    table: dict  # bucket -> {class -> count}
    row_totals: dict  # bucket -> count
    col_totals: dict  # class -> count
    total: int


def testset_stats(testset: TestSet) -> TestSetStats:
    table = {b: {c: 0 for c in PRONOUN_CLASSES} for b in DISTANCE_BUCKETS}
    for ex in testset.examples:
        bucket = distance_bucket(ex.candidate.ante_distance)
        table[bucket][ex.candidate.ref_pronoun_class] += 1
    row_totals = {b: sum(row.values()) for b, row in table.items()}
    col_totals = {
        c: sum(table[b][c] for b in DISTANCE_BUCKETS) for c in PRONOUN_CLASSES
    }
    return TestSetStats(table, row_totals, col_totals, len(testset.examples))


def example_to_record(ex: ContrastiveExample) -> dict:
    cand = ex.candidate
    return {
        "id": ex.example_id,
        "doc_id": cand.doc_id,
        "sent_idx": cand.sent_idx,
        "src": ex.src_sentence,
        "ref": ex.ref_sentence,
        "src_context": list(ex.src_context),
        "ref_context": list(ex.ref_context),
        "src_pronoun": "it",
        "ref_pronoun": cand.ref_pronoun_class,
        "contrastive": [
            {"tgt": v.tgt, "replaced": v.replaced} for v in ex.contrastive
        ],
        "ante_distance": cand.ante_distance,
        "src_antecedent": cand.src_antecedent.surface,
        "tgt_antecedent": cand.tgt_antecedent.surface,
        "tgt_antecedent_gender": {
            "masc": "m", "fem": "f", "neut": "n", "unknown": "?"
        }[cand.tgt_antecedent_gender],
        "fallback_antecedent": bool(
            cand.src_antecedent.fallback or cand.tgt_antecedent.fallback
        ),
    }


def record_to_example(rec: dict) -> ContrastiveExample:
    required = (
        "id", "doc_id", "sent_idx", "src", "ref", "ref_pronoun", "contrastive",
        "ante_distance",
    )
    for key in required:
        if key not in rec:
            raise ValidationError(f"test set record missing field {key!r}")
    gender = {"m": "masc", "f": "fem", "n": "neut", "?": "unknown"}.get(
        rec.get("tgt_antecedent_gender", "?")
    )
    if gender is None:
        raise ValidationError(
            f"{rec['id']}: bad gender code {rec['tgt_antecedent_gender']!r}"
        )
    ref_tokens = rec["ref"].split()
    pron_pos = _pronoun_pos_from_id(rec["id"], ref_tokens, rec["ref_pronoun"])
    fallback = bool(rec.get("fallback_antecedent", False))
    distance = int(rec["ante_distance"])
    ante_sent = int(rec["sent_idx"]) - distance
    cand = CandidateExample(
        doc_id=rec["doc_id"],
        sent_idx=int(rec["sent_idx"]),
        src_pronoun_pos=_find_token(rec["src"].split(), rec.get("src_pronoun", "it")),
        tgt_pronoun_pos=pron_pos,
        ref_pronoun_class=rec["ref_pronoun"],
        src_antecedent=AntecedentRef(rec.get("src_antecedent", ""), 0, ante_sent, fallback),
        tgt_antecedent=AntecedentRef(rec.get("tgt_antecedent", ""), 0, ante_sent, fallback),
        ante_distance=distance,
        tgt_antecedent_gender=gender,
    )
    variants = tuple(
        ContrastiveVariant(v["tgt"], v["replaced"]) for v in rec["contrastive"]
    )
    if len(variants) != 2:
        raise ValidationError(f"{rec['id']}: expected 2 variants, got {len(variants)}")
    return ContrastiveExample(
        candidate=cand,
        src_sentence=rec["src"],
        ref_sentence=rec["ref"],
        src_context=tuple(rec.get("src_context", ())),
        ref_context=tuple(rec.get("ref_context", ())),
        contrastive=variants,
        id_override=rec["id"],
    )


def _find_token(tokens, want: str) -> int:
    low = want.lower()
    for i, tok in enumerate(tokens):
        if tok.lower() == low:
            return i
    return 0


def _pronoun_pos_from_id(example_id: str, ref_tokens, ref_pronoun: str) -> int:
    parts = example_id.rsplit(":", 1)
    if len(parts) == 2 and parts[1].isdigit():
        pos = int(parts[1])
        if pos < len(ref_tokens) and ref_tokens[pos].lower() == ref_pronoun.lower():
            return pos
    return _find_token(ref_tokens, ref_pronoun)


def _dump_json(obj) -> str:
    return json.dumps(obj, ensure_ascii=False, separators=(",", ":"))


def write_testset(testset: TestSet, jsonl_path, manifest_path=None):
    with open(jsonl_path, "w", encoding="utf-8") as fh:
        for ex in testset.examples:
            fh.write(_dump_json(example_to_record(ex)))
            fh.write("\n")
    if manifest_path is not None:
        with open(manifest_path, "w", encoding="utf-8") as fh:
            fh.write(json.dumps(testset.manifest, ensure_ascii=False, indent=2, sort_keys=True))
            fh.write("\n")


def read_testset(jsonl_path, manifest_path=None) -> TestSet:
    examples = []
    with open(jsonl_path, encoding="utf-8") as fh:
        for ln, raw in enumerate(fh, start=1):
            raw = raw.strip()
            if not raw:
                continue
            try:
                rec = json.loads(raw)
            except json.JSONDecodeError as exc:
                raise ValidationError(f"{jsonl_path}: line {ln}: bad JSON: {exc}") from exc
            examples.append(record_to_example(rec))
    manifest = {}
    if manifest_path is not None:
        with open(manifest_path, encoding="utf-8") as fh:
            manifest = json.load(fh)
    seen = set()
    for ex in examples:
        if ex.example_id in seen:
            raise ValidationError(f"{jsonl_path}: duplicate example id {ex.example_id}")
        seen.add(ex.example_id)
    return TestSet(examples, manifest)


def _cp_get(rec: dict, *names, default=None):
    """Key lookup tolerant to the published naming (spaces) and to
    snake_case."""
    for name in names:
        for key in (name, name.replace(" ", "_"), name.replace("_", " ")):
            if key in rec:
                return rec[key]
    return default


def import_contrapro(path) -> TestSet:
    """Maps the published ContraPro field naming onto the native schema.
    Accepts a JSON array or JSONL."""
    with open(path, encoding="utf-8") as fh:
        text = fh.read().strip()
    if not text:
        return TestSet([], {"source_corpus": str(path), "imported": True})
    if text.startswith("["):
        records = json.loads(text)
    else:
        records = [json.loads(line) for line in text.splitlines() if line.strip()]

    gender_map = {
        "masc": "masc", "m": "masc", "masculine": "masc",
        "fem": "fem", "f": "fem", "feminine": "fem",
        "neut": "neut", "n": "neut", "neuter": "neut",
    }
    examples = []
    seen = set()
    for i, rec in enumerate(records):
        doc_id = str(_cp_get(rec, "document id", default=f"doc{i}"))
        seg = _cp_get(rec, "segment id", default=i)
        src = _cp_get(rec, "src segment", default="")
        ref = _cp_get(rec, "ref segment", default="")
        ref_pronoun = str(_cp_get(rec, "ref pronoun", default="")).lower()
        if ref_pronoun not in PRONOUN_CLASSES:
            raise ValidationError(
                f"{path}: record {i}: bad reference pronoun {ref_pronoun!r}"
            )
        distance = int(_cp_get(rec, "ante distance", default=0))
        src_ante = _cp_get(rec, "src ante head", default="") or ""
        tgt_ante = _cp_get(rec, "ref ante head", default="") or ""
        raw_gender = str(_cp_get(rec, "ref ante head gender", default="") or "").lower()
        gender = gender_map.get(raw_gender, "unknown")
        errors = _cp_get(rec, "errors", default=[]) or []
        variants = []
        for err in errors:
            contrastive = _cp_get(err, "contrastive", default=None)
            replaced = str(_cp_get(err, "replacement", default="")).lower()
            if contrastive is None or replaced not in PRONOUN_CLASSES:
                continue
            variants.append(ContrastiveVariant(contrastive, replaced))
        if len(variants) != 2:
            raise ValidationError(
                f"{path}: record {i}: expected 2 contrastive variants, "
                f"got {len(variants)}"
            )

        ref_tokens = ref.split()
        pron_pos = _find_token(ref_tokens, ref_pronoun)
        example_id = f"{doc_id}:{seg}:{pron_pos}"
        if example_id in seen:
            example_id = f"{example_id}#{i}"
        seen.add(example_id)

        fallback = src_ante.lower() == "it"
        sent_idx = int(seg) if str(seg).isdigit() else i
        cand = CandidateExample(
            doc_id=doc_id,
            sent_idx=sent_idx,
            src_pronoun_pos=_find_token(src.split(), "it"),
            tgt_pronoun_pos=pron_pos,
            ref_pronoun_class=ref_pronoun,
            src_antecedent=AntecedentRef(src_ante, 0, sent_idx - distance, fallback),
            tgt_antecedent=AntecedentRef(tgt_ante, 0, sent_idx - distance, fallback),
            ante_distance=distance,
            tgt_antecedent_gender=gender,
        )
        examples.append(
            ContrastiveExample(
                candidate=cand,
                src_sentence=src,
                ref_sentence=ref,
                src_context=tuple(_cp_get(rec, "src context", default=()) or ()),
                ref_context=tuple(_cp_get(rec, "ref context", default=()) or ()),
                contrastive=(variants[0], variants[1]),
                id_override=example_id,
            )
        )
    counts = defaultdict(int)
    for ex in examples:
        counts[ex.candidate.ref_pronoun_class] += 1
    manifest = {
        "source_corpus": str(path),
        "imported": True,
        "counts": {cls: counts.get(cls, 0) for cls in PRONOUN_CLASSES},
        "total": len(examples),
    }
    return TestSet(examples, manifest)

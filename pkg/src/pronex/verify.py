"""Independent re-verification of extracted candidates.

This module re-checks the four extraction predicates directly against the
raw annotation layers, chains, and alignment link sets. It deliberately
shares no helper code with testgen's extraction path, so a bug there cannot
hide here. Used by the soundness checks in the test suite and by
`pronex extract --verify`.
"""

from __future__ import annotations

from .testgen import CandidateExample

_PRONOUN_POS = ("PPER", "PRP", "PRON")


def _covering_chains(chains, sent_idx, pos):
    found = []
    for chain in chains:
        for m in chain.mentions:
            if m.sent_idx == sent_idx and m.start <= pos < m.end:
                found.append((chain, m))
    return found


def recheck_candidate(adoc, alignments, candidate: CandidateExample) -> list[str]:
    """Returns the names of all violated predicates (empty = sound)."""
    violations = []
    doc = adoc.doc
    sent_idx = candidate.sent_idx
    src_sent = doc.source(sent_idx)
    tgt_sent = doc.target(sent_idx)

    # predicate 1: source "it" and a third-person-singular er/sie/es target
    ok = True
    sp = candidate.src_pronoun_pos
    if not (0 <= sp < len(src_sent)):
        ok = False
    else:
        if src_sent.tokens[sp].surface.lower() != "it":
            ok = False
        if adoc.src_layers[sent_idx].pos[sp] not in _PRONOUN_POS:
            ok = False
    tp = candidate.tgt_pronoun_pos
    if not (0 <= tp < len(tgt_sent)):
        ok = False
    else:
        surface = tgt_sent.tokens[tp].surface.lower()
        morph = adoc.tgt_layers[sent_idx].morph[tp]
        if surface not in ("er", "sie", "es"):
            ok = False
        elif surface != candidate.ref_pronoun_class:
            ok = False
        if adoc.tgt_layers[sent_idx].pos[tp] not in _PRONOUN_POS:
            ok = False
        if morph.person != 3 or morph.number != "sg":
            ok = False
    if not ok:
        violations.append("pronoun-pair")

    # predicate 2: the two pronouns are linked
    pair_links = alignments[(doc.doc_id, sent_idx)].links
    if (sp, tp) not in pair_links:
        violations.append("pronoun-alignment")

    # predicate 3: chain membership (English side always; German side except
    # for it->es, which the target-side resolver cannot chain)
    src_hits = _covering_chains(adoc.src_chains, sent_idx, sp)
    if not src_hits:
        violations.append("source-chain")
    tgt_hits = _covering_chains(adoc.tgt_chains, sent_idx, tp)
    if candidate.ref_pronoun_class != "es" and not tgt_hits:
        violations.append("target-chain")

    # predicate 4: recorded antecedent heads exist, precede the pronoun, and
    # are word-aligned
    src_ante = candidate.src_antecedent
    tgt_ante = candidate.tgt_antecedent
    ok = True
    if not (0 <= src_ante.sent_idx <= sent_idx):
        ok = False
    if tgt_ante.sent_idx != src_ante.sent_idx:
        ok = False
    if ok:
        ante_links = alignments[(doc.doc_id, src_ante.sent_idx)].links
        if candidate.ref_pronoun_class == "es":
            if (src_ante.head, tgt_ante.head) not in ante_links:
                ok = False
        else:
            if (src_ante.head, tgt_ante.head) not in ante_links:
                ok = False
        # the recorded surfaces must match the corpus
        if ok:
            if doc.source(src_ante.sent_idx).tokens[src_ante.head].surface != src_ante.surface:
                ok = False
            if doc.target(tgt_ante.sent_idx).tokens[tgt_ante.head].surface != tgt_ante.surface:
                ok = False
        # a non-fallback antecedent must come from a nominal chain mention
        if ok and not src_ante.fallback:
            nominal = any(
                m.is_nominal
                for chain, _ in src_hits
                for m in chain.mentions
                if m.sent_idx == src_ante.sent_idx and m.start <= src_ante.head < m.end
            )
            if not nominal:
                ok = False
    if not ok:
        violations.append("antecedent-alignment")

    if candidate.ante_distance != sent_idx - tgt_ante.sent_idx:
        violations.append("distance")
    return violations


def recheck_all(docs, alignments, candidates) -> dict:
    """Re-verifies every candidate; returns {example_id: violations} for the
    unsound ones."""
    by_id = {d.doc.doc_id: d for d in docs}
    bad = {}
    for cand in candidates:
        violations = recheck_candidate(by_id[cand.doc_id], alignments, cand)
        if violations:
            bad[cand.example_id] = violations
    return bad

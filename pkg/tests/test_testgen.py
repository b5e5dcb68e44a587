import json

import pytest
from hypothesis import given, strategies as st

import synth
from pronex.align import Alignment
from pronex.annotate import CorefChain, Mention, heuristic_annotate
from pronex.corpus import ParallelCorpus, ParallelDocument, Sentence, tokenize
from pronex.errors import UsageError, ValidationError
from pronex.testgen import (
    PRONOUN_CLASSES,
    antecedent_distance,
    balance_sample,
    distance_bucket,
    filter_candidates,
    generate_contrastive,
    import_contrapro,
    read_testset,
    repair_agreement,
    swap_pronoun,
    testset_stats,
    write_testset,
)
from pronex.verify import recheck_all


def de_sentence(text):
    return Sentence(tuple(tokenize(text, "de")), "target")


def make_doc(doc_id, pairs):
    return ParallelDocument(
        doc_id,
        tuple(
            (
                Sentence(tuple(tokenize(s, "en")), "source"),
                Sentence(tuple(tokenize(t, "de")), "target"),
            )
            for s, t in pairs
        ),
    )


@pytest.fixture(scope="module")
def bat_setup():
    doc = make_doc(
        "bat",
        [
            ("Watch out for a bat .", "Pass auf eine Fledermaus auf ."),
            ("It could get tangled in your hair .", "Sie könnte sich in deinem Haar verfangen ."),
        ],
    )
    corpus = ParallelCorpus((doc,))
    docs = heuristic_annotate(corpus)
    alignments = {
        ("bat", 0): Alignment.of((4, 3)),
        ("bat", 1): Alignment.of((0, 0), (6, 4), (7, 6)),
    }
    return docs, alignments


class TestFilter:
    def test_bat_example_extracted(self, bat_setup):
        docs, alignments = bat_setup
        [cand] = filter_candidates(docs, alignments)
        assert cand.ref_pronoun_class == "sie"
        assert cand.ante_distance == 1
        assert cand.src_antecedent.surface == "bat"
        assert cand.tgt_antecedent.surface == "Fledermaus"
        assert cand.tgt_antecedent_gender == "fem"
        assert not cand.src_antecedent.fallback

    def test_copula_alignment_rejected(self):
        # "it" aligned to "ist": must not survive predicates 1+2
        doc = make_doc("cop", [("It is good .", "Es ist gut .")])
        docs = heuristic_annotate(ParallelCorpus((doc,)))
        alignments = {("cop", 0): Alignment.of((0, 1), (2, 2), (3, 3))}
        assert filter_candidates(docs, alignments) == []

    def test_unchained_pronoun_rejected(self, bat_setup):
        docs, _ = bat_setup
        # same sentences, but the pronoun alignment lands on an unchained pair
        doc = make_doc("x", [("It could rain .", "Es könnte regnen .")])
        annotated = heuristic_annotate(ParallelCorpus((doc,)))
        alignments = {("x", 0): Alignment.of((0, 0))}
        # "Es" is never chained on the German side, and the English "it" has
        # no antecedent: predicate 3 rejects
        assert filter_candidates(annotated, alignments) == []

    def test_synthetic_corpus_counts(self, synth_small):
        cands = filter_candidates(
            synth_small["annotated"], synth_small["alignments"]
        )
        expected = synth_small["expected"]
        assert len(cands) == len(expected)
        assert {c.doc_id for c in cands} == set(expected)
        for cand in cands:
            exp = expected[cand.doc_id]
            assert cand.ref_pronoun_class == exp["class"]
            assert cand.ante_distance == exp["distance"]
            assert cand.tgt_antecedent.surface == exp["tgt_antecedent"]
            if exp.get("fallback"):
                assert cand.tgt_antecedent.fallback

    def test_filter_soundness_recheck(self, synth_small):
        cands = filter_candidates(
            synth_small["annotated"], synth_small["alignments"]
        )
        bad = recheck_all(synth_small["annotated"], synth_small["alignments"], cands)
        assert bad == {}

    def test_missing_alignment_rejected(self, bat_setup):
        docs, alignments = bat_setup
        with pytest.raises(UsageError, match="no alignment"):
            filter_candidates(docs, {("bat", 0): alignments[("bat", 0)]})

    def test_parallel_extraction_matches_serial(self, synth_small):
        serial = filter_candidates(
            synth_small["annotated"], synth_small["alignments"], jobs=1
        )
        parallel = filter_candidates(
            synth_small["annotated"], synth_small["alignments"], jobs=3
        )
        assert serial == parallel


class TestDistance:
    def test_same_sentence_zero(self, synth_small):
        cands = filter_candidates(
            synth_small["annotated"], synth_small["alignments"]
        )
        zero = [c for c in cands if synth_small["expected"][c.doc_id]["distance"] == 0]
        assert zero and all(antecedent_distance(c) == 0 for c in zero)

    def test_bat_distance_one(self, bat_setup):
        docs, alignments = bat_setup
        [cand] = filter_candidates(docs, alignments)
        assert antecedent_distance(cand) == 1

    def test_door_distance_two(self):
        doc = make_doc(
            "door",
            [
                ("What 's with the door ?", "Was ist mit der Tür ?"),
                ("It won't open .", "Sie geht nicht auf ."),
                ("- Is it locked ?", "- Ist sie abgeschlossen ?"),
            ],
        )
        docs = heuristic_annotate(ParallelCorpus((doc,)))
        alignments = {
            ("door", 0): Alignment.of((4, 4)),
            ("door", 1): Alignment.of((0, 0)),
            ("door", 2): Alignment.of((0, 0), (1, 1), (2, 2), (3, 3), (4, 4)),
        }
        cands = filter_candidates(docs, alignments)
        by_sent = {c.sent_idx: c for c in cands}
        assert by_sent[2].ante_distance == 2
        assert by_sent[2].tgt_antecedent.surface == "Tür"

    def test_buckets(self):
        assert [distance_bucket(d) for d in (0, 1, 2, 3, 4, 9)] == [
            "0", "1", "2", "3", ">3", ">3",
        ]


class TestSwap:
    def test_bat_swap(self):
        sent = de_sentence("Sie könnte sich in deinem Haar verfangen .")
        assert swap_pronoun(sent, 0, "er").text() == (
            "Er könnte sich in deinem Haar verfangen ."
        )

    def test_door_swap(self):
        sent = de_sentence("- Ist sie abgeschlossen ?")
        assert swap_pronoun(sent, 2, "er").text() == "- Ist er abgeschlossen ?"

    def test_same_class_identity(self):
        sent = de_sentence("Er kommt .")
        assert swap_pronoun(sent, 0, "er").text() == sent.text()

    def test_not_a_pronoun_rejected(self):
        sent = de_sentence("Der Hund bellt .")
        with pytest.raises(UsageError):
            swap_pronoun(sent, 1, "er")

    def test_all_caps_preserved(self):
        sent = de_sentence("SIE KOMMT .")
        assert swap_pronoun(sent, 0, "es").text() == "ES KOMMT ."

    @given(
        st.sampled_from(PRONOUN_CLASSES),
        st.sampled_from(PRONOUN_CLASSES),
        st.booleans(),
    )
    def test_involution(self, original, other, capitalized):
        surface = original.capitalize() if capitalized else original
        sent = Sentence.from_surfaces([surface, "kommt", "."], "target")
        swapped = swap_pronoun(sent, 0, other)
        back = swap_pronoun(swapped, 0, original)
        assert back.surfaces() == sent.surfaces()


class TestRepair:
    def chains(self):
        return (
            CorefChain(
                "c0",
                (Mention(1, 0, 1, 0, False, True), Mention(1, 2, 3, 2, False, True)),
            ),
        )

    def test_masc_to_fem_remaps_stem(self):
        sent = de_sentence("Es hat seine Farbe verloren .")
        swapped = swap_pronoun(sent, 0, "sie")
        repaired = repair_agreement(swapped, self.chains(), 0, "fem", sent_idx=1)
        assert repaired.text() == "Sie hat ihre Farbe verloren ."

    def test_masc_to_neut_shares_stem(self):
        sent = de_sentence("Er hat seine Farbe verloren .")
        swapped = swap_pronoun(sent, 0, "es")
        repaired = repair_agreement(swapped, self.chains(), 0, "neut", sent_idx=1)
        assert repaired.text() == "Es hat seine Farbe verloren ."

    def test_unrelated_chain_untouched(self):
        sent = de_sentence("Es hat seine Farbe verloren .")
        other = (
            CorefChain("c1", (Mention(1, 0, 1, 0, False, True),)),
            CorefChain("c2", (Mention(1, 2, 3, 2, False, True),)),
        )
        swapped = swap_pronoun(sent, 0, "sie")
        repaired = repair_agreement(swapped, other, 0, "fem", sent_idx=1)
        assert repaired.text() == "Sie hat seine Farbe verloren ."

    @pytest.mark.parametrize(
        "possessive,gender,expected",
        [
            ("seinem", "fem", "ihrem"),
            ("seiner", "fem", "ihrer"),
            ("seines", "fem", "ihres"),
            ("seinen", "fem", "ihren"),
            ("sein", "fem", "ihr"),
            ("ihre", "masc", "seine"),
            ("ihrem", "neut", "seinem"),
            ("Ihre", "masc", "Seine"),
        ],
    )
    def test_paradigm_suffixes(self, possessive, gender, expected):
        # oracle: the sein/ihr declension table shares suffixes exactly
        sent = Sentence.from_surfaces(["sie", "mag", possessive, "Farbe"], "target")
        chains = (
            CorefChain(
                "c",
                (Mention(0, 0, 1, 0, False, True), Mention(0, 2, 3, 2, False, True)),
            ),
        )
        repaired = repair_agreement(sent, chains, 0, gender, sent_idx=0)
        assert repaired.surfaces()[2] == expected


class TestGenerate:
    def test_variant_classes_cover(self, synth_small, docs_by_id):
        cands = filter_candidates(
            synth_small["annotated"], synth_small["alignments"]
        )
        for cand in cands[:30]:
            ex = generate_contrastive(cand, docs_by_id)
            classes = {v.replaced for v in ex.contrastive}
            classes.add(cand.ref_pronoun_class)
            assert classes == set(PRONOUN_CLASSES)
            for variant in ex.contrastive:
                assert len(variant.tgt.split()) == len(ex.ref_sentence.split())

    def test_context_depth_reaches_antecedent(self, synth_small, docs_by_id):
        cands = filter_candidates(
            synth_small["annotated"], synth_small["alignments"]
        )
        for cand in cands:
            ex = generate_contrastive(cand, docs_by_id)
            assert len(ex.src_context) == len(ex.ref_context)
            if cand.sent_idx > 0:
                assert len(ex.src_context) >= 1
            assert len(ex.src_context) >= min(cand.ante_distance, cand.sent_idx)

    def test_minimal_token_diff(self, synth_small, docs_by_id):
        cands = filter_candidates(
            synth_small["annotated"], synth_small["alignments"]
        )
        for cand in cands:
            adoc = docs_by_id[cand.doc_id]
            ex = generate_contrastive(cand, docs_by_id)
            chain_positions = {
                m.head
                for chain in adoc.tgt_chains
                for m in chain.mentions
                if m.sent_idx == cand.sent_idx
            }
            ref_tokens = ex.ref_sentence.split()
            for variant in ex.contrastive:
                diff = [
                    i
                    for i, (a, b) in enumerate(zip(ref_tokens, variant.tgt.split()))
                    if a != b
                ]
                assert all(
                    i == cand.tgt_pronoun_pos or i in chain_positions for i in diff
                )


class TestBalanceSample:
    def test_counts_and_manifest(self, synth_small, docs_by_id):
        cands = filter_candidates(
            synth_small["annotated"], synth_small["alignments"]
        )
        testset = balance_sample(cands, 12, seed=5, docs_by_id=docs_by_id)
        assert len(testset.examples) == 36
        assert testset.manifest["counts"] == {"er": 12, "sie": 12, "es": 12}
        assert testset.manifest["seed"] == 5

    def test_zero_per_class(self):
        testset = balance_sample([], 0, seed=1)
        assert testset.examples == []

    def test_shortfall_names_class(self, synth_small, docs_by_id):
        cands = [
            c
            for c in filter_candidates(
                synth_small["annotated"], synth_small["alignments"]
            )
            if c.ref_pronoun_class != "er"
        ]
        with pytest.raises(UsageError, match="'er'"):
            balance_sample(cands, 5, seed=1, docs_by_id=docs_by_id)

    def test_seeded_determinism_bytes(self, synth_small, docs_by_id, tmp_path):
        cands = filter_candidates(
            synth_small["annotated"], synth_small["alignments"]
        )
        paths = []
        for run in (0, 1):
            testset = balance_sample(cands, 10, seed=42, docs_by_id=docs_by_id)
            path = tmp_path / f"ts{run}.jsonl"
            write_testset(testset, path, tmp_path / f"m{run}.json")
            paths.append(path)
        assert paths[0].read_bytes() == paths[1].read_bytes()
        assert (tmp_path / "m0.json").read_bytes() == (tmp_path / "m1.json").read_bytes()

    def test_different_seeds_differ(self, synth_small, docs_by_id):
        cands = filter_candidates(
            synth_small["annotated"], synth_small["alignments"]
        )
        a = balance_sample(cands, 10, seed=1, docs_by_id=docs_by_id)
        b = balance_sample(cands, 10, seed=2, docs_by_id=docs_by_id)
        assert (
            [e.example_id for e in a.examples] != [e.example_id for e in b.examples]
        )


class TestStats:
    def test_empty(self):
        stats = testset_stats(balance_sample([], 0, seed=1))
        assert stats.total == 0
        assert all(v == 0 for v in stats.row_totals.values())

    def test_bucketing(self, synth_small, docs_by_id):
        cands = filter_candidates(
            synth_small["annotated"], synth_small["alignments"]
        )
        testset = balance_sample(cands, 12, seed=3, docs_by_id=docs_by_id)
        stats = testset_stats(testset)
        assert sum(stats.row_totals.values()) == stats.total == 36
        assert stats.col_totals == {"er": 12, "sie": 12, "es": 12}
        by_bucket = {b: 0 for b in stats.row_totals}
        for ex in testset.examples:
            by_bucket[distance_bucket(ex.candidate.ante_distance)] += 1
        assert by_bucket == stats.row_totals


class TestSerialization:
    def test_jsonl_round_trip(self, synth_small, docs_by_id, tmp_path):
        cands = filter_candidates(
            synth_small["annotated"], synth_small["alignments"]
        )
        testset = balance_sample(cands, 8, seed=9, docs_by_id=docs_by_id)
        path = tmp_path / "ts.jsonl"
        write_testset(testset, path)
        loaded = read_testset(path)
        assert [e.example_id for e in loaded.examples] == [
            e.example_id for e in testset.examples
        ]
        for a, b in zip(loaded.examples, testset.examples):
            assert a.ref_sentence == b.ref_sentence
            assert a.contrastive == b.contrastive
            assert a.candidate.ante_distance == b.candidate.ante_distance
            assert a.candidate.tgt_antecedent_gender == b.candidate.tgt_antecedent_gender

    def test_record_schema_fields(self, synth_small, docs_by_id, tmp_path):
        cands = filter_candidates(
            synth_small["annotated"], synth_small["alignments"]
        )
        testset = balance_sample(cands, 2, seed=9, docs_by_id=docs_by_id)
        path = tmp_path / "ts.jsonl"
        write_testset(testset, path)
        rec = json.loads(path.read_text(encoding="utf-8").splitlines()[0])
        assert set(rec) == {
            "id", "doc_id", "sent_idx", "src", "ref", "src_context",
            "ref_context", "src_pronoun", "ref_pronoun", "contrastive",
            "ante_distance", "src_antecedent", "tgt_antecedent",
            "tgt_antecedent_gender", "fallback_antecedent",
        }
        assert rec["src_pronoun"] == "it"
        assert rec["ref_pronoun"] in PRONOUN_CLASSES
        assert len(rec["contrastive"]) == 2


CONTRAPRO_STYLE = [
    {
        "document id": "doc-a",
        "segment id": 3,
        "src segment": "Is it locked ?",
        "ref segment": "Ist sie abgeschlossen ?",
        "src pronoun": "it",
        "ref pronoun": "sie",
        "ante distance": 2,
        "src ante head": "door",
        "ref ante head": "Tür",
        "ref ante head gender": "Fem",
        "errors": [
            {"type": "pronominal coreference", "contrastive": "Ist er abgeschlossen ?", "replacement": "er"},
            {"type": "pronominal coreference", "contrastive": "Ist es abgeschlossen ?", "replacement": "es"},
        ],
    },
    {
        "document id": "doc-b",
        "segment id": 7,
        "src segment": "It is new .",
        "ref segment": "Es ist neu .",
        "src pronoun": "it",
        "ref pronoun": "es",
        "ante distance": 0,
        "src ante head": "it",
        "ref ante head": "es",
        "ref ante head gender": "Neut",
        "errors": [
            {"contrastive": "Er ist neu .", "replacement": "er"},
            {"contrastive": "Sie ist neu .", "replacement": "sie"},
        ],
    },
]


class TestImportContrapro:
    def test_field_mapping(self, tmp_path):
        path = tmp_path / "cp.json"
        path.write_text(json.dumps(CONTRAPRO_STYLE), encoding="utf-8")
        testset = import_contrapro(path)
        assert len(testset.examples) == 2
        first = testset.examples[0]
        assert first.candidate.ref_pronoun_class == "sie"
        assert first.candidate.ante_distance == 2
        assert first.candidate.tgt_antecedent.surface == "Tür"
        assert first.candidate.tgt_antecedent_gender == "fem"
        assert {v.replaced for v in first.contrastive} == {"er", "es"}
        # fallback antecedent is recorded as the pronoun itself
        assert testset.examples[1].candidate.src_antecedent.fallback

    def test_jsonl_form_accepted(self, tmp_path):
        path = tmp_path / "cp.jsonl"
        path.write_text(
            "\n".join(json.dumps(r) for r in CONTRAPRO_STYLE) + "\n",
            encoding="utf-8",
        )
        testset = import_contrapro(path)
        assert len(testset.examples) == 2

    def test_stats_after_import(self, tmp_path):
        path = tmp_path / "cp.json"
        path.write_text(json.dumps(CONTRAPRO_STYLE), encoding="utf-8")
        stats = testset_stats(import_contrapro(path))
        assert stats.table["2"]["sie"] == 1
        assert stats.table["0"]["es"] == 1
        assert stats.total == 2

    def test_bad_pronoun_rejected(self, tmp_path):
        record = dict(CONTRAPRO_STYLE[0], **{"ref pronoun": "ihn"})
        path = tmp_path / "cp.json"
        path.write_text(json.dumps([record]), encoding="utf-8")
        with pytest.raises(ValidationError):
            import_contrapro(path)

    def test_full_distribution_round_trip(self, tmp_path):
        # 12000 synthetic records laid out with the published distance
        # distribution; the import + stats path must reproduce it exactly
        distribution = {
            "0": {"es": 872, "er": 736, "sie": 792},
            "1": {"es": 1892, "er": 2577, "sie": 2606},
            "2": {"es": 631, "er": 459, "sie": 420},
            "3": {"es": 274, "er": 167, "sie": 132},
            ">3": {"es": 331, "er": 61, "sie": 50},
        }
        sentence = {"er": "Er ist hier .", "sie": "Sie ist hier .", "es": "Es ist hier ."}
        others = {"er": ("sie", "es"), "sie": ("er", "es"), "es": ("er", "sie")}
        records = []
        for bucket, row in distribution.items():
            distance = 4 if bucket == ">3" else int(bucket)
            for cls, count in row.items():
                for k in range(count):
                    a, b = others[cls]
                    records.append({
                        "document id": f"{bucket}-{cls}",
                        "segment id": k + distance,
                        "src segment": "It is here .",
                        "ref segment": sentence[cls],
                        "src pronoun": "it",
                        "ref pronoun": cls,
                        "ante distance": distance,
                        "src ante head": "thing",
                        "ref ante head": "Ding",
                        "ref ante head gender": {"er": "Masc", "sie": "Fem", "es": "Neut"}[cls],
                        "errors": [
                            {"contrastive": sentence[a], "replacement": a},
                            {"contrastive": sentence[b], "replacement": b},
                        ],
                    })
        path = tmp_path / "cp.json"
        path.write_text(json.dumps(records), encoding="utf-8")
        stats = testset_stats(import_contrapro(path))
        assert stats.total == 12000
        assert stats.col_totals == {"es": 4000, "er": 4000, "sie": 4000}
        for bucket, row in distribution.items():
            for cls, count in row.items():
                assert stats.table[bucket][cls] == count
        assert stats.row_totals == {"0": 2400, "1": 7075, "2": 1510, "3": 573, ">3": 442}

from pathlib import Path

import pytest
from hypothesis import given, strategies as st

import oracles
from pronex.bleu import compute_bleu, corpus_bleu, tokenize_13a
from pronex.errors import UsageError

DATA = Path(__file__).parent / "data"

# frozen from the reference implementation (oracles.bleu_reference) on the
# shipped 20-sentence fixture
FIXTURE_CASED = 52.93858846624981
FIXTURE_UNCASED = 56.35757369478996


def load_fixture():
    hyp = (DATA / "bleu_hyp.txt").read_text(encoding="utf-8").splitlines()
    ref = (DATA / "bleu_ref.txt").read_text(encoding="utf-8").splitlines()
    return hyp, ref


class TestComputeBleu:
    def test_identity_is_100(self):
        _, ref = load_fixture()
        assert compute_bleu(ref, ref, cased=True) == pytest.approx(100.0)
        assert compute_bleu(ref, ref, cased=False) == pytest.approx(100.0)

    def test_empty_hypotheses_zero(self):
        assert compute_bleu([], [], cased=True) == 0.0
        assert compute_bleu([""], ["a b c"], cased=True) == 0.0

    def test_length_mismatch_rejected(self):
        with pytest.raises(UsageError):
            compute_bleu(["a"], ["a", "b"], cased=True)

    def test_fixture_matches_reference_within_tolerance(self):
        hyp, ref = load_fixture()
        assert len(hyp) == len(ref) == 20
        cased = compute_bleu(hyp, ref, cased=True)
        uncased = compute_bleu(hyp, ref, cased=False)
        assert cased == pytest.approx(FIXTURE_CASED, abs=0.1)
        assert uncased == pytest.approx(FIXTURE_UNCASED, abs=0.1)
        # and against a live run of the reference implementation
        assert cased == pytest.approx(
            oracles.bleu_reference(hyp, ref, lowercase=False), abs=0.1
        )
        assert uncased == pytest.approx(
            oracles.bleu_reference(hyp, ref, lowercase=True), abs=0.1
        )

    def test_uncased_at_least_cased_on_fixture(self):
        hyp, ref = load_fixture()
        assert compute_bleu(hyp, ref, cased=False) >= compute_bleu(hyp, ref, cased=True)

    def test_score_range(self):
        hyp, ref = load_fixture()
        result = corpus_bleu(hyp, ref)
        assert 0.0 <= result.score <= 100.0
        assert 0.0 < result.brevity_penalty <= 1.0

    def test_brevity_penalty_applies(self):
        short = ["der Hund"]
        full = ["der Hund bellt laut im Garten ."]
        result = corpus_bleu(short, full)
        assert result.brevity_penalty < 1.0

    @given(
        st.lists(
            st.text(alphabet="abc defß.", min_size=1, max_size=25),
            min_size=1, max_size=6,
        )
    )
    def test_self_bleu_is_100(self, lines):
        # guard against degenerate all-empty segments
        if not any(tokenize_13a(line) for line in lines):
            return
        assert compute_bleu(lines, lines, cased=True) == pytest.approx(100.0)

    @given(
        st.lists(
            st.text(alphabet="abcd ef.", min_size=1, max_size=25),
            min_size=1, max_size=5,
        ),
        st.lists(
            st.text(alphabet="abcd ef.", min_size=1, max_size=25),
            min_size=1, max_size=5,
        ),
    )
    def test_matches_reference_on_random_input(self, hyp, ref):
        n = min(len(hyp), len(ref))
        hyp, ref = hyp[:n], ref[:n]
        if not any(tokenize_13a(line) for line in hyp):
            return
        assert compute_bleu(hyp, ref, cased=True) == pytest.approx(
            oracles.bleu_reference(hyp, ref, lowercase=False), abs=1e-9
        )


class TestTokenize13a:
    def test_punctuation_and_digits(self):
        assert tokenize_13a("A 3.5% cut, right?") == [
            "A", "3.5", "%", "cut", ",", "right", "?",
        ]

    def test_entity_unescaping(self):
        assert tokenize_13a("a &quot;b&quot; &amp; c") == ["a", '"', "b", '"', "&", "c"]

    def test_matches_reference_tokenizer(self):
        hyp, ref = load_fixture()
        for line in hyp + ref:
            assert tokenize_13a(line) == oracles._ref_tokenize_13a(line).split()

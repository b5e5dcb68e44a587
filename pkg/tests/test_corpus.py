import pytest
from hypothesis import given, strategies as st

from pronex.corpus import (
    ParallelCorpus,
    ParallelDocument,
    Sentence,
    Token,
    context_window,
    corpus_to_lines,
    load_jsonl_documents,
    load_parallel_documents,
    tokenize,
)
from pronex.errors import UsageError, ValidationError


def write(path, lines):
    path.write_text("".join(line + "\n" for line in lines), encoding="utf-8")
    return path


class TestLoad:
    def test_empty_files_empty_boundaries(self, tmp_path):
        src = write(tmp_path / "s", [])
        tgt = write(tmp_path / "t", [])
        corpus = load_parallel_documents(src, tgt, [])
        assert len(corpus) == 0
        assert corpus.num_pairs() == 0

    def test_two_documents_from_boundaries(self, tmp_path):
        src = write(tmp_path / "s", ["a", "b", "c", "d", "e"])
        tgt = write(tmp_path / "t", ["A", "B", "C", "D", "E"])
        corpus = load_parallel_documents(src, tgt, [2, 5])
        assert [len(d) for d in corpus.documents] == [2, 3]
        assert corpus.num_pairs() == 5

    def test_fixture_corpus_counts_match_line_scan(self, tmp_path):
        # oracle: independent line scan of the same files
        src_lines = [f"src {i}" for i in range(10)]
        tgt_lines = [f"tgt {i}" for i in range(10)]
        src = write(tmp_path / "s", src_lines)
        tgt = write(tmp_path / "t", tgt_lines)
        bounds = write(tmp_path / "b", ["4", "7", "10"])
        corpus = load_parallel_documents(src, tgt, bounds)
        n_lines = sum(1 for _ in open(src, encoding="utf-8"))
        assert corpus.num_pairs() == n_lines == 10
        assert [len(d) for d in corpus.documents] == [4, 3, 3]
        flat = [s.text() for _, _, s, _ in corpus.iter_pairs()]
        assert flat == src_lines

    def test_line_count_mismatch_names_both_counts(self, tmp_path):
        src = write(tmp_path / "s", ["a", "b", "c"])
        tgt = write(tmp_path / "t", ["A"])
        with pytest.raises(ValidationError, match=r"3.*1"):
            load_parallel_documents(src, tgt, [3])

    def test_boundary_out_of_range(self, tmp_path):
        src = write(tmp_path / "s", ["a", "b"])
        tgt = write(tmp_path / "t", ["A", "B"])
        with pytest.raises(ValidationError, match="out of range"):
            load_parallel_documents(src, tgt, [5])
        with pytest.raises(ValidationError, match="strictly increasing"):
            load_parallel_documents(src, tgt, [2, 2])
        with pytest.raises(ValidationError, match="does not equal line count"):
            load_parallel_documents(src, tgt, [1])

    def test_no_boundaries_synthesizes_one_flagged_document(self, tmp_path):
        src = write(tmp_path / "s", ["a", "b", "c"])
        tgt = write(tmp_path / "t", ["A", "B", "C"])
        corpus = load_parallel_documents(src, tgt, None)
        assert corpus.synthetic_boundaries
        assert len(corpus) == 1
        assert len(corpus.documents[0]) == 3

    def test_jsonl_documents(self, tmp_path):
        path = tmp_path / "c.jsonl"
        path.write_text(
            '{"doc_id": "a", "src": ["x y"], "tgt": ["u v"]}\n'
            '{"doc_id": "b", "src": ["p", "q"], "tgt": ["P", "Q"]}\n',
            encoding="utf-8",
        )
        corpus = load_jsonl_documents(path)
        assert [d.doc_id for d in corpus.documents] == ["a", "b"]
        assert corpus.num_pairs() == 3

    def test_jsonl_side_length_mismatch_rejected(self, tmp_path):
        path = tmp_path / "c.jsonl"
        path.write_text(
            '{"doc_id": "a", "src": ["x", "y"], "tgt": ["u"]}\n', encoding="utf-8"
        )
        with pytest.raises(ValidationError, match="2 source vs 1 target"):
            load_jsonl_documents(path)

    def test_duplicate_doc_ids_rejected(self, tmp_path):
        path = tmp_path / "c.jsonl"
        path.write_text(
            '{"doc_id": "a", "src": ["x"], "tgt": ["u"]}\n'
            '{"doc_id": "a", "src": ["p"], "tgt": ["P"]}\n',
            encoding="utf-8",
        )
        with pytest.raises(ValidationError, match="duplicate document id"):
            load_jsonl_documents(path)

    def test_pretokenized_round_trip(self, tmp_path):
        src_lines = ["Das ist ein Test .", "- Ist sie abgeschlossen ?"]
        tgt_lines = ["This is a test .", "- Is it locked ?"]
        src = write(tmp_path / "s", src_lines)
        tgt = write(tmp_path / "t", tgt_lines)
        corpus = load_parallel_documents(src, tgt, [2], pretokenized=True)
        out_src, out_tgt = corpus_to_lines(corpus)
        assert out_src == src_lines
        assert out_tgt == tgt_lines


class TestTokenize:
    def test_empty(self):
        assert tokenize("", "en") == []

    def test_contractions(self):
        assert [t.surface for t in tokenize("It won't open.", "en")] == [
            "It", "wo", "n't", "open", ".",
        ]

    def test_german_question(self):
        assert [t.surface for t in tokenize("die Tür?", "de")] == ["die", "Tür", "?"]

    @pytest.mark.parametrize(
        "text,lang,expected",
        [
            ("John's dog", "en", ["John", "'s", "dog"]),
            ("Mr. Smith came.", "en", ["Mr.", "Smith", "came", "."]),
            ("wait... now", "en", ["wait", "...", "now"]),
            ("z.B. hier", "de", ["z.B.", "hier"]),
            ("1,000 dollars", "en", ["1,000", "dollars"]),
            ("a 3.5 % cut", "en", ["a", "3.5", "%", "cut"]),
            ("(really)", "en", ["(", "really", ")"]),
        ],
    )
    def test_cases(self, text, lang, expected):
        assert [t.surface for t in tokenize(text, lang)] == expected

    def test_indices_contiguous(self):
        tokens = tokenize("one two three", "en")
        assert [t.index for t in tokens] == [0, 1, 2]

    @given(st.text(alphabet=st.characters(blacklist_categories=("Cs", "Cc")), max_size=60))
    def test_idempotent_on_own_output(self, text):
        once = [t.surface for t in tokenize(text, "en")]
        twice = [t.surface for t in tokenize(" ".join(once), "en")]
        assert once == twice

    @given(st.text(alphabet="abß ätü.',?!-", max_size=40))
    def test_idempotent_german(self, text):
        once = [t.surface for t in tokenize(text, "de")]
        twice = [t.surface for t in tokenize(" ".join(once), "de")]
        assert once == twice

    def test_token_invariants(self):
        with pytest.raises(ValidationError):
            Token("", 0)
        with pytest.raises(ValidationError):
            Token("a b", 0)


def make_doc(n):
    pairs = tuple(
        (
            Sentence.from_surfaces([f"s{i}"], "source"),
            Sentence.from_surfaces([f"t{i}"], "target"),
        )
        for i in range(n)
    )
    return ParallelDocument("d", pairs)


class TestContextWindow:
    def test_document_start(self):
        assert context_window(make_doc(3), 0, 1) == []

    def test_single_preceding(self):
        doc = make_doc(3)
        [prev] = context_window(doc, 2, 1)
        assert prev.text() == "s1"

    def test_truncated_at_boundary(self):
        doc = make_doc(3)
        window = context_window(doc, 1, 5)
        assert [s.text() for s in window] == ["s0"]

    def test_target_side(self):
        doc = make_doc(3)
        window = context_window(doc, 2, 2, "target")
        assert [s.text() for s in window] == ["t0", "t1"]

    def test_out_of_range(self):
        with pytest.raises(ValidationError):
            context_window(make_doc(2), 2, 1)
        with pytest.raises(UsageError):
            context_window(make_doc(2), 1, -1)

    @given(st.integers(1, 12), st.data())
    def test_window_length_law(self, n, data):
        doc = make_doc(n)
        idx = data.draw(st.integers(0, n - 1))
        k = data.draw(st.integers(0, 15))
        assert len(context_window(doc, idx, k)) == min(idx, k)

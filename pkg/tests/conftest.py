import sys
from pathlib import Path

import pytest

TESTS_DIR = Path(__file__).parent
sys.path.insert(0, str(TESTS_DIR))

import synth  # noqa: E402


@pytest.fixture(scope="session")
def synth_small():
    """60 good + 15 violation documents, with in-memory library objects."""
    builders, expected = synth.generate_corpus(n_good_docs=60, n_violation_docs=15)
    corpus, annotated, keyed = synth.load_for_library(builders)
    return {
        "builders": builders,
        "expected": expected,
        "corpus": corpus,
        "annotated": annotated,
        "alignments": keyed,
    }


@pytest.fixture(scope="session")
def synth_files(tmp_path_factory):
    """The same corpus as files for CLI runs."""
    builders, expected = synth.generate_corpus(n_good_docs=60, n_violation_docs=15)
    outdir = tmp_path_factory.mktemp("synthcorpus")
    synth.write_corpus_files(builders, outdir)
    return {"dir": outdir, "expected": expected}


@pytest.fixture()
def docs_by_id(synth_small):
    return {d.doc.doc_id: d for d in synth_small["annotated"]}


STUB_SCORER = TESTS_DIR / "stub_scorer.py"
CONFORMANCE_DIR = TESTS_DIR.parent / "conformance"

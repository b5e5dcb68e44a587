from pronex.evaluation import builtin_scorer, evaluate_testset
from pronex.report import (
    accuracy_tables,
    markdown_table,
    stats_table,
    tsv_table,
    write_evaluation_reports,
    write_stats_reports,
)
from pronex.testgen import balance_sample, filter_candidates, testset_stats


def make_testset(synth_small):
    cands = filter_candidates(synth_small["annotated"], synth_small["alignments"])
    docs_by_id = {d.doc.doc_id: d for d in synth_small["annotated"]}
    return balance_sample(cands, 10, seed=2, docs_by_id=docs_by_id)


def test_table_renderers():
    assert tsv_table(["a", "b"], [[1, 2]]) == "a\tb\n1\t2\n"
    md = markdown_table(["a", "b"], [[1, 2]])
    assert md.splitlines()[0] == "| a | b |"
    assert md.splitlines()[2] == "| 1 | 2 |"


def test_accuracy_table_shapes(synth_small):
    testset = make_testset(synth_small)
    report = evaluate_testset(builtin_scorer("prior"), testset)
    tables = accuracy_tables(report)
    header, rows = tables["by_pronoun"]
    assert header == ["system", "total", "er", "sie", "es"]
    assert rows[0][1] == "0.333"
    header, _ = tables["by_location"]
    assert header == ["system", "intrasegmental", "external"]
    header, _ = tables["by_distance"]
    assert header == ["system", "0", "1", "2", "3", ">3"]


def test_stats_table_totals(synth_small):
    testset = make_testset(synth_small)
    stats = testset_stats(testset)
    header, rows = stats_table(stats)
    assert header == ["distance", "er", "sie", "es", "total"]
    total_row = rows[-1]
    assert total_row[0] == "total"
    assert total_row[-1] == 30
    assert sum(row[-1] for row in rows[:-1]) == 30


def test_report_files_written(synth_small, tmp_path):
    testset = make_testset(synth_small)
    report = evaluate_testset(builtin_scorer("oracle", testset=testset), testset)
    written = write_evaluation_reports(report, tmp_path / "rep")
    names = {p.name for p in written}
    assert {"report.json", "report.md", "accuracy_by_pronoun.tsv",
            "accuracy_by_pronoun.png"} <= names
    for path in written:
        assert path.exists() and path.stat().st_size > 0
    written = write_stats_reports(testset_stats(testset), tmp_path / "stats")
    assert {p.name for p in written} == {
        "testset_stats.tsv", "testset_stats.md", "testset_stats.png",
    }


def test_figures_byte_stable(synth_small, tmp_path):
    testset = make_testset(synth_small)
    stats = testset_stats(testset)
    write_stats_reports(stats, tmp_path / "a")
    write_stats_reports(stats, tmp_path / "b")
    assert (tmp_path / "a" / "testset_stats.png").read_bytes() == (
        tmp_path / "b" / "testset_stats.png"
    ).read_bytes()

"""Report rendering: TSV and markdown tables shaped like the standard
accuracy breakdowns, plus figures rendered to PNG files next to them.
"""

from __future__ import annotations

import json
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .align import AlignmentStats  # noqa: E402
from .evaluation import EvaluationReport  # noqa: E402
from .testgen import DISTANCE_BUCKETS, PRONOUN_CLASSES, TestSetStats  # noqa: E402

# keep PNG output byte-stable across reruns
_PNG_METADATA = {"Software": "pronex"}


def _fmt(value: float) -> str:
    return f"{value:.3f}"


def tsv_table(header, rows) -> str:
    lines = ["\t".join(header)]
    lines += ["\t".join(str(c) for c in row) for row in rows]
    return "\n".join(lines) + "\n"


def markdown_table(header, rows) -> str:
    lines = ["| " + " | ".join(header) + " |"]
    lines.append("|" + "|".join(" --- " for _ in header) + "|")
    lines += ["| " + " | ".join(str(c) for c in row) + " |" for row in rows]
    return "\n".join(lines) + "\n"


def accuracy_tables(report: EvaluationReport) -> dict:
    """The three accuracy breakdowns as (header, rows) pairs. Cells with no
    examples render as '-'."""
    name = report.scorer or "scorer"

    def cell(accuracies, counts, key):
        return _fmt(accuracies[key]) if counts.get(key) else "-"

    pron_header = ["system", "total"] + list(PRONOUN_CLASSES)
    pron_row = [name, _fmt(report.total_accuracy)] + [
        cell(report.by_pronoun, report.counts_by_pronoun, c)
        for c in PRONOUN_CLASSES
    ]
    loc_header = ["system", "intrasegmental", "external"]
    loc_row = [name] + [
        cell(report.by_location, report.counts_by_location, l)
        for l in ("intrasegmental", "external")
    ]
    dist_header = ["system"] + list(DISTANCE_BUCKETS)
    dist_row = [name] + [
        cell(report.by_distance, report.counts_by_distance, b)
        for b in DISTANCE_BUCKETS
    ]
    return {
        "by_pronoun": (pron_header, [pron_row]),
        "by_location": (loc_header, [loc_row]),
        "by_distance": (dist_header, [dist_row]),
    }


def stats_table(stats: TestSetStats):
    header = ["distance"] + list(PRONOUN_CLASSES) + ["total"]
    rows = []
    for bucket in DISTANCE_BUCKETS:
        rows.append(
            [bucket]
            + [stats.table[bucket][c] for c in PRONOUN_CLASSES]
            + [stats.row_totals[bucket]]
        )
    rows.append(
        ["total"] + [stats.col_totals[c] for c in PRONOUN_CLASSES] + [stats.total]
    )
    return header, rows


def alignment_table(stats: AlignmentStats):
    header = ["alignment", "frequency", "probability"]
    rows = [
        [f"{stats.word}->{tgt}", count, _fmt(prob)]
        for tgt, count, prob in stats.rows
    ]
    return header, rows


def _bar_figure(path, labels, values, title, ylabel, ylim=None):
    fig, ax = plt.subplots(figsize=(6, 3.5))
    ax.bar(range(len(labels)), values, color="#4878a8")
    ax.set_xticks(range(len(labels)))
    ax.set_xticklabels(labels)
    ax.set_title(title)
    ax.set_ylabel(ylabel)
    if ylim:
        ax.set_ylim(*ylim)
    ax.spines["right"].set_visible(False)
    ax.spines["top"].set_visible(False)
    fig.tight_layout()
    fig.savefig(path, metadata=_PNG_METADATA)
    plt.close(fig)


def write_evaluation_reports(report: EvaluationReport, outdir) -> list[Path]:
    """Writes report.json, one TSV per breakdown, a combined markdown
    report, and accuracy figures. Returns the written paths."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    written = []

    json_path = outdir / "report.json"
    with open(json_path, "w", encoding="utf-8") as fh:
        json.dump(report.to_json_dict(), fh, ensure_ascii=False, indent=2, sort_keys=True)
        fh.write("\n")
    written.append(json_path)

    tables = accuracy_tables(report)
    md_parts = [f"# Contrastive evaluation: {report.scorer or 'scorer'}\n"]
    md_parts.append(f"Total accuracy: **{_fmt(report.total_accuracy)}** over {report.n} examples\n")
    for key, (header, rows) in tables.items():
        tsv_path = outdir / f"accuracy_{key}.tsv"
        tsv_path.write_text(tsv_table(header, rows), encoding="utf-8")
        written.append(tsv_path)
        md_parts.append(f"## Accuracy {key.replace('_', ' ')}\n")
        md_parts.append(markdown_table(header, rows))
    md_path = outdir / "report.md"
    md_path.write_text("\n".join(md_parts), encoding="utf-8")
    written.append(md_path)

    pron_png = outdir / "accuracy_by_pronoun.png"
    _bar_figure(
        pron_png,
        ["total"] + list(PRONOUN_CLASSES),
        [report.total_accuracy]
        + [report.by_pronoun.get(c, 0.0) for c in PRONOUN_CLASSES],
        "Accuracy by reference pronoun", "accuracy", ylim=(0, 1.05),
    )
    written.append(pron_png)

    dist_png = outdir / "accuracy_by_distance.png"
    _bar_figure(
        dist_png,
        list(DISTANCE_BUCKETS),
        [report.by_distance.get(b, 0.0) for b in DISTANCE_BUCKETS],
        "Accuracy by antecedent distance", "accuracy", ylim=(0, 1.05),
    )
    written.append(dist_png)

    loc_png = outdir / "accuracy_by_location.png"
    _bar_figure(
        loc_png,
        ["intrasegmental", "external"],
        [report.by_location.get(l, 0.0) for l in ("intrasegmental", "external")],
        "Accuracy by antecedent location", "accuracy", ylim=(0, 1.05),
    )
    written.append(loc_png)
    return written


def write_stats_reports(stats: TestSetStats, outdir) -> list[Path]:
    """Class-by-distance distribution of a test set: TSV, markdown, and a
    grouped bar figure."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    header, rows = stats_table(stats)
    written = []
    tsv_path = outdir / "testset_stats.tsv"
    tsv_path.write_text(tsv_table(header, rows), encoding="utf-8")
    written.append(tsv_path)
    md_path = outdir / "testset_stats.md"
    md_path.write_text(
        "# Test set distribution\n\n" + markdown_table(header, rows),
        encoding="utf-8",
    )
    written.append(md_path)

    fig, ax = plt.subplots(figsize=(6.5, 3.5))
    width = 0.25
    for i, cls in enumerate(PRONOUN_CLASSES):
        xs = [j + (i - 1) * width for j in range(len(DISTANCE_BUCKETS))]
        ax.bar(xs, [stats.table[b][cls] for b in DISTANCE_BUCKETS], width, label=cls)
    ax.set_xticks(range(len(DISTANCE_BUCKETS)))
    ax.set_xticklabels(DISTANCE_BUCKETS)
    ax.set_xlabel("antecedent distance (sentences)")
    ax.set_ylabel("examples")
    ax.set_title("Pronoun classes by antecedent distance")
    ax.legend()
    ax.spines["right"].set_visible(False)
    ax.spines["top"].set_visible(False)
    fig.tight_layout()
    png_path = outdir / "testset_stats.png"
    fig.savefig(png_path, metadata=_PNG_METADATA)
    plt.close(fig)
    written.append(png_path)
    return written


def write_alignment_reports(stats: AlignmentStats, outdir, top_n: int = 12) -> list[Path]:
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    header, rows = alignment_table(stats)
    written = []
    tsv_path = outdir / "alignment_stats.tsv"
    tsv_path.write_text(tsv_table(header, rows), encoding="utf-8")
    written.append(tsv_path)
    md_path = outdir / "alignment_stats.md"
    md_path.write_text(
        f"# Alignments of {stats.word!r} ({stats.total_occurrences} occurrences)\n\n"
        + markdown_table(header, rows),
        encoding="utf-8",
    )
    written.append(md_path)

    top = stats.rows[:top_n]
    if top:
        png_path = outdir / "alignment_stats.png"
        _bar_figure(
            png_path,
            [t for t, _, _ in top],
            [p for _, _, p in top],
            f"Alignment probabilities of {stats.word!r}",
            "probability",
        )
        written.append(png_path)
    return written

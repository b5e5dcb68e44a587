"""Command-line front end.

Subcommands: tokenize, align, stats, extract, evaluate, bleu,
import-contrapro. Options can come from a key=value config file
(--config); explicit flags win. Exit codes: 0 success, 1 evaluation-level
failure (scorer crash, protocol violation), 2 usage or validation error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
from pathlib import Path

from . import __version__
from .align import (
    align_corpus,
    alignment_stats,
    decode_alignments,
    read_pharaoh,
    save_lex_tsv,
    train_alignment_models,
    write_pharaoh,
)
from .annotate import heuristic_annotate, ingest_annotations
from .bleu import corpus_bleu
from .corpus import load_jsonl_documents, load_parallel_documents, tokenize
from .errors import ProtocolError, TransportError, UsageError, ValidationError
from .evaluation import evaluate_testset
from .scorers import parse_scorer_spec
from .testgen import (
    balance_sample,
    filter_candidates,
    import_contrapro,
    read_testset,
    testset_stats,
    write_testset,
)
from .verify import recheck_all

ENV_SEED = "CONTRAPRO_SEED"


def _load_config(path) -> dict:
    """key=value per line; # starts a comment; values are parsed as int,
    float, bool, or string."""
    config = {}
    with open(path, encoding="utf-8") as fh:
        for ln, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValidationError(f"{path}: line {ln}: expected key=value")
            key, value = (part.strip() for part in line.split("=", 1))
            if value.startswith(("'", '"')) and value.endswith(value[0]) and len(value) > 1:
                config[key] = value[1:-1]
                continue
            low = value.lower()
            if low in ("true", "false"):
                config[key] = low == "true"
            else:
                try:
                    config[key] = int(value)
                except ValueError:
                    try:
                        config[key] = float(value)
                    except ValueError:
                        config[key] = value
    return config


def _resolve_jobs(args):
    if getattr(args, "jobs", None) is None:
        args.jobs = max(1, os.cpu_count() or 1)
    elif args.jobs < 1:
        raise UsageError(f"--jobs must be >= 1, got {args.jobs}")


def _resolve_seed(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get(ENV_SEED)
    if env is not None:
        try:
            return int(env)
        except ValueError as exc:
            raise UsageError(f"{ENV_SEED} must be an integer, got {env!r}") from exc
    return 1


def _write_run_manifest(outdir: Path, command: str, args: argparse.Namespace):
    settings = {
        k: (str(v) if isinstance(v, Path) else v)
        for k, v in sorted(vars(args).items())
        if k not in ("func", "config") and not callable(v)
    }
    blob = json.dumps(settings, sort_keys=True, ensure_ascii=False)
    manifest = {
        "tool": "pronex",
        "version": __version__,
        "command": command,
        "settings": settings,
        "config_hash": hashlib.sha256(blob.encode("utf-8")).hexdigest(),
    }
    outdir.mkdir(parents=True, exist_ok=True)
    with open(outdir / "run_manifest.json", "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, ensure_ascii=False, indent=2, sort_keys=True)
        fh.write("\n")


def _load_corpus(args):
    if getattr(args, "jsonl", None):
        return load_jsonl_documents(args.jsonl, pretokenized=args.pretokenized)
    if not args.src or not args.tgt:
        raise UsageError("need --src and --tgt (or --jsonl)")
    return load_parallel_documents(
        args.src, args.tgt, args.boundaries, pretokenized=args.pretokenized,
        src_lang=args.src_lang, tgt_lang=args.tgt_lang,
    )


def _alignments_for(corpus, args):
    if getattr(args, "alignments", None):
        flat = read_pharaoh(args.alignments)
        n = corpus.num_pairs()
        if len(flat) != n:
            raise ValidationError(
                f"{args.alignments}: {len(flat)} alignment lines for {n} "
                "sentence pairs"
            )
    else:
        flat = align_corpus(
            corpus, args.ibm1_iters, args.diag_iters, args.tension,
            args.null_prob, args.symmetrization, args.jobs,
        )
    keyed = {}
    i = 0
    for doc in corpus.documents:
        for idx in range(len(doc)):
            keyed[(doc.doc_id, idx)] = flat[i]
            i += 1
    return flat, keyed


def _annotated_docs(corpus, args):
    if getattr(args, "annotations", None):
        return ingest_annotations(corpus, args.annotations)
    return heuristic_annotate(corpus)


def cmd_tokenize(args) -> int:
    out = open(args.output, "w", encoding="utf-8") if args.output else sys.stdout
    try:
        with open(args.input, encoding="utf-8") as fh:
            for line in fh:
                tokens = tokenize(line.rstrip("\n"), args.lang)
                out.write(" ".join(t.surface for t in tokens))
                out.write("\n")
    finally:
        if args.output:
            out.close()
    return 0


def cmd_align(args) -> int:
    _resolve_jobs(args)
    corpus = _load_corpus(args)
    outdir = Path(args.out)
    _write_run_manifest(outdir, "align", args)
    fwd_model, rev_model = train_alignment_models(
        corpus, args.ibm1_iters, args.diag_iters, args.tension,
        args.null_prob, args.jobs,
    )
    flat = decode_alignments(corpus, fwd_model, rev_model, args.symmetrization)
    write_pharaoh(flat, outdir / "alignments.txt")
    save_lex_tsv(fwd_model.lex, outdir / "lex.tsv")
    print(f"wrote {corpus.num_pairs()} alignments to {outdir / 'alignments.txt'}")
    return 0


def cmd_stats(args) -> int:
    from .report import write_alignment_reports

    _resolve_jobs(args)
    corpus = _load_corpus(args)
    outdir = Path(args.out)
    _write_run_manifest(outdir, "stats", args)
    flat, _ = _alignments_for(corpus, args)
    stats = alignment_stats(corpus, flat, args.word)
    write_alignment_reports(stats, outdir)
    print(f"{stats.word}: {stats.total_occurrences} source-side occurrences")
    for tgt, count, prob in stats.rows[:10]:
        print(f"  {stats.word}->{tgt}\t{count}\t{prob:.3f}")
    return 0


def cmd_extract(args) -> int:
    from .report import write_stats_reports

    _resolve_jobs(args)
    corpus = _load_corpus(args)
    outdir = Path(args.out)
    _write_run_manifest(outdir, "extract", args)
    docs = _annotated_docs(corpus, args)
    _, keyed = _alignments_for(corpus, args)
    candidates = filter_candidates(docs, keyed, jobs=args.jobs)
    if args.verify:
        bad = recheck_all(docs, keyed, candidates)
        if bad:
            raise ProtocolError(
                f"soundness re-check failed for {len(bad)} candidates: "
                f"{sorted(bad)[:3]}"
            )
    seed = _resolve_seed(args)
    docs_by_id = {d.doc.doc_id: d for d in docs}
    source_name = args.jsonl or args.src or "corpus"
    testset = balance_sample(
        candidates, args.n_per_class, seed, docs_by_id,
        source_corpus=str(source_name),
    )
    testset.manifest["synthetic_boundaries"] = corpus.synthetic_boundaries
    write_testset(testset, outdir / "testset.jsonl", outdir / "manifest.json")
    write_stats_reports(testset_stats(testset), outdir)
    print(
        f"extracted {len(candidates)} candidates, sampled "
        f"{len(testset.examples)} examples (seed {seed})"
    )
    return 0


def cmd_evaluate(args) -> int:
    from .report import write_evaluation_reports

    _resolve_jobs(args)
    testset = read_testset(args.testset)
    if not testset.examples:
        raise ValidationError(f"{args.testset}: empty test set")
    outdir = Path(args.out)
    _write_run_manifest(outdir, "evaluate", args)
    scorer = parse_scorer_spec(args.scorer, testset=testset)
    report = evaluate_testset(scorer, testset, args.context_depth)
    write_evaluation_reports(report, outdir)
    print(f"total accuracy: {report.total_accuracy:.3f} (n={report.n})")
    return 0


def cmd_bleu(args) -> int:
    with open(args.hypotheses, encoding="utf-8") as fh:
        hyps = [line.rstrip("\n") for line in fh]
    with open(args.references, encoding="utf-8") as fh:
        refs = [line.rstrip("\n") for line in fh]
    cased = corpus_bleu(hyps, refs, lowercase=False)
    uncased = corpus_bleu(hyps, refs, lowercase=True)
    print(f"BLEU cased: {cased.score:.2f}")
    print(f"BLEU uncased: {uncased.score:.2f}")
    if args.out:
        outdir = Path(args.out)
        _write_run_manifest(outdir, "bleu", args)
        with open(outdir / "bleu.json", "w", encoding="utf-8") as fh:
            json.dump(
                {
                    "cased": cased.score,
                    "uncased": uncased.score,
                    "brevity_penalty": cased.brevity_penalty,
                    "sys_len": cased.sys_len,
                    "ref_len": cased.ref_len,
                },
                fh, indent=2, sort_keys=True,
            )
            fh.write("\n")
    return 0


def cmd_import_contrapro(args) -> int:
    from .report import write_stats_reports

    outdir = Path(args.out)
    _write_run_manifest(outdir, "import-contrapro", args)
    testset = import_contrapro(args.input)
    write_testset(testset, outdir / "testset.jsonl", outdir / "manifest.json")
    write_stats_reports(testset_stats(testset), outdir)
    print(f"imported {len(testset.examples)} examples")
    return 0


def _add_corpus_options(p):
    p.add_argument("--src", help="source-side text, one sentence per line")
    p.add_argument("--tgt", help="target-side text, one sentence per line")
    p.add_argument("--boundaries", help="document boundary file (end indices)")
    p.add_argument("--jsonl", help="corpus in JSONL document format")
    p.add_argument("--pretokenized", action="store_true",
                   help="input is already tokenized; split on spaces only")
    p.add_argument("--src-lang", default="en")
    p.add_argument("--tgt-lang", default="de")


def _add_align_options(p):
    p.add_argument("--alignments", help="precomputed alignments (Pharaoh format)")
    p.add_argument("--ibm1-iters", type=int, default=4)
    p.add_argument("--diag-iters", type=int, default=4)
    p.add_argument("--tension", type=float, default=4.0)
    p.add_argument("--null-prob", type=float, default=0.08)
    p.add_argument(
        "--symmetrization", default="grow-diag-final-and",
        choices=("intersection", "union", "grow-diag-final-and"),
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pronex",
        description="Contrastive pronoun-translation test sets and scorer evaluation",
    )
    parser.add_argument("--version", action="version", version=f"pronex {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("tokenize", help="tokenize a text file")
    p.add_argument("--input", required=True)
    p.add_argument("--output")
    p.add_argument("--lang", default="en")
    p.set_defaults(func=cmd_tokenize)

    p = sub.add_parser("align", help="train alignment models and align a corpus")
    _add_corpus_options(p)
    _add_align_options(p)
    p.add_argument("--out", default="out")
    p.add_argument("--jobs", type=int, default=None,
                   help="worker bound (default: available cores; 1 = cross-machine deterministic)")
    p.set_defaults(func=cmd_align)

    p = sub.add_parser("stats", help="alignment frequency table for a source word")
    _add_corpus_options(p)
    _add_align_options(p)
    p.add_argument("--word", default="it")
    p.add_argument("--out", default="out")
    p.add_argument("--jobs", type=int, default=None,
                   help="worker bound (default: available cores; 1 = cross-machine deterministic)")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("extract", help="build a contrastive test set")
    _add_corpus_options(p)
    _add_align_options(p)
    p.add_argument("--annotations", help="annotation JSONL (parser/coref output)")
    p.add_argument("--n-per-class", type=int, default=10)
    p.add_argument("--seed", type=int, default=None,
                   help=f"sampling seed (falls back to ${ENV_SEED}, then 1)")
    p.add_argument("--verify", action="store_true",
                   help="re-check every candidate against the raw layers")
    p.add_argument("--out", default="out")
    p.add_argument("--jobs", type=int, default=None,
                   help="worker bound (default: available cores; 1 = cross-machine deterministic)")
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("evaluate", help="score a test set and report accuracy")
    p.add_argument("--testset", required=True)
    p.add_argument(
        "--scorer", default="echo",
        help="oracle|anti_oracle|echo|prior[:k=v,..]|random[:seed=N]|"
             "ngram:model=..|ngram:train=..|cmd:<command line>",
    )
    p.add_argument("--context-depth", type=int, default=None,
                   help="truncate stored context to this many sentences")
    p.add_argument("--out", default="out")
    p.add_argument("--jobs", type=int, default=None,
                   help="worker bound (default: available cores; 1 = cross-machine deterministic)")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("bleu", help="corpus BLEU (quality control)")
    p.add_argument("--hypotheses", required=True)
    p.add_argument("--references", required=True)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_bleu)

    p = sub.add_parser("import-contrapro", help="import a published test set")
    p.add_argument("--input", required=True)
    p.add_argument("--out", default="out")
    p.set_defaults(func=cmd_import_contrapro)

    for sp in sub.choices.values():
        sp.add_argument("--config", help="key=value config file; flags win")
    parser.subcommands = dict(sub.choices)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = _parse_with_config(parser, argv)
        return args.func(args)
    except (UsageError, ValidationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"error: missing file: {exc.filename}", file=sys.stderr)
        return 2
    except (ProtocolError, TransportError) as exc:
        extra = f" ({exc.completed} responses received)" if isinstance(exc, TransportError) else ""
        print(f"error: {exc}{extra}", file=sys.stderr)
        return 1


def _parse_with_config(parser, argv):
    """Two-phase parse: read --config first, install its values as
    defaults, then parse the real argv so explicit flags win."""
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    if known.config:
        config = _load_config(known.config)
        valid = {
            action.dest
            for sp in parser.subcommands.values()
            for action in sp._actions
        }
        unknown = set(config) - valid
        if unknown:
            raise ValidationError(
                f"{known.config}: unknown config keys: {sorted(unknown)}"
            )
        for sp in parser.subcommands.values():
            sp.set_defaults(**{k: v for k, v in config.items()
                               if any(a.dest == k for a in sp._actions)})
    return parser.parse_args(argv)


if __name__ == "__main__":
    sys.exit(main())

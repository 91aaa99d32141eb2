"""Command-line entry point.

Every subcommand accepts ``--config FILE`` and repeatable ``--set KEY=VALUE``
overrides; dedicated flags such as ``--seed`` are shorthands for config keys.
On failure the last stderr line reads ``error: <Category>: <message>`` and
the exit status is nonzero.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from dataclasses import asdict
from pathlib import Path

import numpy as np

from . import __version__
from .classifiers import FAMILIES, TrainedModel, load_model, predict_scores, save_model
from .config import RunConfig, parse_config, parse_value
from .corpus_io import KeywordSet, Label, LabeledCorpus, RawPost, class_counts, filter_by_keywords, load_corpus, write_corpus
from .errors import PipelineError, UnlabeledPost
from .evaluation import confusion_matrix, metrics_from_confusion
from .harness import PRESETS, run_experiment
from .reports import published_diff_table, render_reports
from .synthetic import generate_synthetic_corpus
from .text import DEFAULT_TABLE, NormalizationTable, PreprocessOptions, clean_tokens, preprocess_corpus
from .tfidf import fit_transform, transform_many

# flag dest -> config key
_FLAG_KEYS = {
    "input": "input",
    "format": "format",
    "seed": "seed",
    "model": "family",
    "experiment": "experiment",
    "paper_compat": "paper_compat",
    "real_data": "real_data",
}


def _common(p: argparse.ArgumentParser, out_help: str) -> None:
    p.add_argument("--config", help="YAML config file")
    p.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                   help="override a config key, e.g. split.k=5 (repeatable)")
    p.add_argument("--input", help="corpus file (csv or jsonl); synthetic corpus when omitted")
    p.add_argument("--format", choices=["csv", "jsonl"])
    p.add_argument("--seed", type=int)
    p.add_argument("--out", help=out_help)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="soranidep", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="load and validate a corpus, print statistics")
    _common(p, "optional path to write the (filtered) corpus")
    p.add_argument("--keyword-filter", action="store_true", help="keep only posts matching a keyword")

    p = sub.add_parser("preprocess", help="write the cleaned corpus and print drop statistics")
    _common(p, "output corpus path (required)")

    p = sub.add_parser("train", help="train one model and save it")
    _common(p, "model file path (default: config model_file)")
    p.add_argument("--model", choices=FAMILIES)

    p = sub.add_parser("predict", help="label an (unlabeled) corpus with a saved model")
    _common(p, "predictions CSV path (default: stdout)")
    p.add_argument("--model-file", required=True)

    p = sub.add_parser("evaluate", help="score a saved model on a labeled corpus")
    _common(p, "optional metrics JSON path")
    p.add_argument("--model-file", required=True)

    p = sub.add_parser("run-experiment", help="run one preset experiment")
    _common(p, "reports root directory")
    p.add_argument("--experiment", choices=sorted(PRESETS))
    p.add_argument("--paper-compat", action="store_true", default=None,
                   help="resample the whole working set before splitting")

    p = sub.add_parser("run-suite", help="run all four preset experiments")
    _common(p, "reports root directory")
    p.add_argument("--paper-compat", action="store_true", default=None,
                   help="resample the whole working set before splitting")
    p.add_argument("--real-data", action="store_true", default=None,
                   help="print per-cell deltas against the published tables")

    p = sub.add_parser("synth", help="write a synthetic corpus")
    _common(p, "output corpus path (required)")
    return ap


def _config_from(args) -> RunConfig:
    overrides = {}
    for item in args.set:
        key, sep, value = item.partition("=")
        if not sep:
            raise argparse.ArgumentTypeError(f"--set expects KEY=VALUE, got {item!r}")
        overrides[key.strip()] = parse_value(value)
    for dest, key in _FLAG_KEYS.items():
        v = getattr(args, dest, None)
        if v is not None:
            overrides[key] = v
    if args.command in ("run-experiment", "run-suite") and args.out is not None:
        overrides["out"] = args.out
    return parse_config(args.config, overrides)


def _table(cfg: RunConfig) -> NormalizationTable:
    return NormalizationTable.from_file(cfg.preprocess.table) if cfg.preprocess.table else DEFAULT_TABLE


def _corpus(cfg: RunConfig) -> LabeledCorpus:
    corpus = load_corpus(cfg.input, cfg.format) if cfg.input else generate_synthetic_corpus(cfg.synthetic_spec())
    if cfg.preprocess.keyword_filter:
        kw = KeywordSet.from_file(cfg.preprocess.keywords) if cfg.preprocess.keywords else KeywordSet()
        corpus = filter_by_keywords(corpus, kw)
    return corpus


def _require_out(args):
    if not args.out:
        raise argparse.ArgumentTypeError(f"{args.command} needs --out")
    return args.out


def cmd_ingest(args, cfg):
    if args.keyword_filter:
        cfg.preprocess.keyword_filter = True
    corpus = _corpus(cfg)
    labeled = sum(p.label is not None for p in corpus)
    info = {"posts": len(corpus), "labeled": labeled, "provenance": corpus.provenance}
    if labeled == len(corpus):
        info["class_counts"] = {lab.token: n for lab, n in class_counts(corpus).items()}
    print(json.dumps(info, ensure_ascii=False, indent=2))
    if args.out:
        write_corpus(corpus, args.out, cfg.format)


def cmd_preprocess(args, cfg):
    out = _require_out(args)
    corpus = _corpus(cfg)
    processed = preprocess_corpus(corpus, cfg.preprocess_options(), _table(cfg), require_labels=False)
    cleaned = LabeledCorpus(tuple(RawPost(d.id, " ".join(d.tokens), d.label) for d in processed.docs),
                            provenance=corpus.provenance + "; preprocessed")
    write_corpus(cleaned, out, cfg.format)
    print(json.dumps({"output": len(cleaned), **processed.stats.as_dict()}, indent=2))


def cmd_train(args, cfg):
    corpus = _corpus(cfg)
    processed = preprocess_corpus(corpus, cfg.preprocess_options(), _table(cfg))
    vocab, X = fit_transform(processed.tokens, cfg.features.min_df)
    y = np.asarray(processed.labels)
    spec = cfg.model_spec(cfg.family)
    model = spec.fit(X, y, len(Label))
    meta = {"model": spec.describe(), "preprocess": asdict(cfg.preprocess_options()),
            "min_df": cfg.features.min_df, "n_train": len(y)}
    path = args.out or cfg.model_file
    save_model(TrainedModel(model, vocab, meta), path)
    print(json.dumps({"model_file": str(path), "family": spec.family, "n_train": len(y),
                      "vocab_size": len(vocab)}))


def _features_for(trained: TrainedModel, corpus: LabeledCorpus, cfg: RunConfig):
    table = _table(cfg)
    saved = trained.metadata.get("preprocess")
    opts = PreprocessOptions(**saved) if saved else cfg.preprocess_options()
    docs = [clean_tokens(p.text, opts, table)[0] for p in corpus]
    return transform_many(docs, trained.vocabulary)


def cmd_predict(args, cfg):
    trained = load_model(args.model_file)
    corpus = _corpus(cfg)
    X = _features_for(trained, corpus, cfg)
    scores = predict_scores(trained, X)
    labels = np.argmax(scores, axis=1)
    C = scores.shape[1]
    names = [lab.token for lab in list(Label)[:C]]
    fh = open(args.out, "w", encoding="utf-8", newline="") if args.out else sys.stdout
    try:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["id", "label", *(f"score_{n}" for n in names)])
        for post, lab, row in zip(corpus, labels, scores):
            w.writerow([post.id, names[int(lab)], *(repr(float(s)) for s in row)])
    finally:
        if fh is not sys.stdout:
            fh.close()


def cmd_evaluate(args, cfg):
    trained = load_model(args.model_file)
    corpus = _corpus(cfg)
    X = _features_for(trained, corpus, cfg)
    missing = [p.id for p in corpus if p.label is None]
    if missing:
        raise UnlabeledPost(missing[0])
    y = np.asarray([int(p.label) for p in corpus])
    C = trained.model.n_classes
    pred = np.argmax(predict_scores(trained, X), axis=1)
    M = confusion_matrix(y, pred, C)
    out = {"metrics": metrics_from_confusion(M).as_dict(), "confusion": M.tolist()}
    text = json.dumps(out, indent=2)
    print(text)
    if args.out:
        Path(args.out).write_text(text + "\n", encoding="utf-8")


def cmd_run_experiment(args, cfg):
    corpus = _corpus(cfg)
    report = run_experiment(cfg.experiment_spec(cfg.experiment), corpus)
    out = Path(cfg.out) / cfg.suite
    render_reports([report], out)
    print((out / "accuracy.md").read_text(encoding="utf-8"))
    print((out / "f1.md").read_text(encoding="utf-8"))


def cmd_run_suite(args, cfg):
    if cfg.real_data and not cfg.input:
        raise argparse.ArgumentTypeError("--real-data needs --input pointing at the released dataset")
    corpus = _corpus(cfg)
    reports = [run_experiment(cfg.experiment_spec(name), corpus) for name in PRESETS]
    out = Path(cfg.out) / cfg.suite
    render_reports(reports, out)
    print((out / "accuracy.md").read_text(encoding="utf-8"))
    print((out / "f1.md").read_text(encoding="utf-8"))
    if cfg.real_data:
        print(published_diff_table(reports))


def cmd_synth(args, cfg):
    out = _require_out(args)
    corpus = generate_synthetic_corpus(cfg.synthetic_spec())
    write_corpus(corpus, out, cfg.format)
    print(json.dumps({"posts": len(corpus), "class_counts": {k.token: v for k, v in class_counts(corpus).items()}}))


COMMANDS = {
    "ingest": cmd_ingest,
    "preprocess": cmd_preprocess,
    "train": cmd_train,
    "predict": cmd_predict,
    "evaluate": cmd_evaluate,
    "run-experiment": cmd_run_experiment,
    "run-suite": cmd_run_suite,
    "synth": cmd_synth,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = _config_from(args)
        COMMANDS[args.command](args, cfg)
    except PipelineError as e:
        print(f"error: {e.category}: {e}", file=sys.stderr)
        return 2
    except argparse.ArgumentTypeError as e:
        print(f"error: UsageError: {e}", file=sys.stderr)
        return 2
    except (ValueError, OSError) as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())

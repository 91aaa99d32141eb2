"""Run the four presets on the default synthetic corpus and write reports."""

import argparse
from pathlib import Path

from soranidep.harness import run_paper_suite
from soranidep.reports import markdown_table, render_reports
from soranidep.synthetic import SyntheticSpec, generate_synthetic_corpus


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=42)
    ap.add_argument("--paper-compat", action="store_true")
    ap.add_argument("--out", default="reports/synthetic")
    args = ap.parse_args()

    corpus = generate_synthetic_corpus(SyntheticSpec(seed=args.seed))
    reports = run_paper_suite(corpus, seed=args.seed, paper_compat=args.paper_compat)
    render_reports(reports, Path(args.out))
    print(markdown_table(reports, "accuracy"))
    print(markdown_table(reports, "macro_f1"))
    for r in reports:
        cv = {f: round(res.cv.summary["macro_f1_mean"], 3) for f, res in r.results.items()}
        print(f"{r.spec.name} sizes={r.sizes} cv macro-F1 mean={cv}")


if __name__ == "__main__":
    main()

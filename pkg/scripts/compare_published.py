"""Run the suite on a labeled corpus file and print per-cell deltas against the published tables.

Intended for the released dataset; resampling uses the whole-dataset scope so
working-set sizes match the published totals.
"""

import argparse

from soranidep.corpus_io import load_corpus
from soranidep.harness import class_count_tuple, run_paper_suite
from soranidep.reports import published_diff_table, render_reports


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("input")
    ap.add_argument("--format", choices=["csv", "jsonl"])
    ap.add_argument("--seed", type=int, default=42)
    ap.add_argument("--out", default="reports/real")
    args = ap.parse_args()

    corpus = load_corpus(args.input, args.format)
    print("class counts:", class_count_tuple(corpus))
    reports = run_paper_suite(corpus, seed=args.seed, paper_compat=True)
    for r in reports:
        print(r.spec.name, r.sizes)
    render_reports(reports, args.out)
    print(published_diff_table(reports))


if __name__ == "__main__":
    main()

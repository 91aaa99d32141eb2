"""Report files: comparison tables, per-model metric CSVs, confusion blocks, plot data.

Layout under ``out_dir``::

    accuracy.md  f1.md  plotdata.csv  metrics.csv  manifest.json
    <experiment>/<model>/metrics.csv
    <experiment>/<model>/confusion.csv

Everything except ``manifest.json`` is a pure function of the reports'
numbers, so identical runs give byte-identical files. The manifest carries
wall-clock timings and lists them under ``nondeterministic``.
"""

from __future__ import annotations

import csv
import io
import json
from decimal import ROUND_HALF_UP, Decimal
from pathlib import Path
from typing import Sequence

from .classifiers import FAMILIES, FAMILY_NAMES
from .corpus_io import Label
from .errors import EmptyReportList, IoFailure

# Published comparison tables, integer percent, experiments 1..4.
PUBLISHED_ACCURACY = {
    "svm": (67, 52, 36, 77),
    "mnb": (66, 51, 36, 70),
    "lr": (65, 50, 37, 78),
    "rf": (66, 48, 39, 80),
}
PUBLISHED_F1 = {
    "svm": (67, 48, 36, 77),
    "mnb": (66, 45, 35, 70),
    "lr": (65, 46, 37, 78),
    "rf": (66, 44, 38, 80),
}
EXPERIMENT_ORDER = ("exp1", "exp2", "exp3", "exp4")


def percent(x: float) -> int:
    """Round a fraction to an integer percentage, halves up (0.801 -> 80)."""
    return int((Decimal(repr(float(x))) * 100).quantize(Decimal(1), rounding=ROUND_HALF_UP))


def _fmt(v) -> str:
    return repr(float(v)) if isinstance(v, float) else str(v)


def _families(reports) -> list[str]:
    present = {f for r in reports for f in r.results}
    return [f for f in FAMILIES if f in present]


def markdown_table(reports, metric: str) -> str:
    """Models as rows, experiments as columns, integer percentages."""
    header = "| Model | " + " | ".join(r.spec.title or r.spec.name for r in reports) + " |"
    sep = "|---|" + "---|" * len(reports)
    lines = [header, sep]
    for fam in _families(reports):
        cells = []
        for r in reports:
            res = r.results.get(fam)
            cells.append(f"{percent(getattr(res.holdout, metric))}%" if res else "-")
        lines.append(f"| {FAMILY_NAMES[fam]} | " + " | ".join(cells) + " |")
    return "\n".join(lines) + "\n"


def metric_rows(report) -> list[dict]:
    rows = []
    for fam, res in report.results.items():
        rows.append({"experiment": report.spec.name, "model": fam, "split": "holdout", **res.holdout.as_dict()})
        if res.cv is not None:
            for i, fold in enumerate(res.cv.folds):
                rows.append({"experiment": report.spec.name, "model": fam, "split": f"fold_{i}", **fold.as_dict()})
    return rows


def _csv_text(rows: Sequence[dict]) -> str:
    if not rows:
        return ""
    fields = list(rows[0])
    for r in rows[1:]:
        fields.extend(k for k in r if k not in fields)
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n", restval="")
    w.writeheader()
    for r in rows:
        w.writerow({k: _fmt(v) for k, v in r.items()})
    return buf.getvalue()


def confusion_csv(report, family: str) -> str:
    res = report.results[family]
    names = [lab.token for lab in list(Label)[: report.spec.n_classes]]
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["block", "true\\pred", *names])
    blocks = [("holdout", res.confusion)]
    if res.cv is not None:
        blocks += [(f"fold_{i}", M) for i, M in enumerate(res.cv.confusions)]
    for block, M in blocks:
        for name, row in zip(names, M):
            w.writerow([block, name, *(int(v) for v in row)])
    return buf.getvalue()


def plotdata_csv(reports) -> str:
    rows = [{"experiment": r.spec.name, "model": fam, "accuracy": res.holdout.accuracy,
             "macro_f1": res.holdout.macro_f1}
            for r in reports for fam, res in r.results.items()]
    return _csv_text(rows)


def _write(path: Path, text: str):
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8")
    except OSError as e:
        raise IoFailure(str(e)) from e


def render_reports(reports, out_dir) -> list[Path]:
    if not reports:
        raise EmptyReportList("nothing to render")
    out = Path(out_dir)
    written = []

    def put(rel, text):
        p = out / rel
        _write(p, text)
        written.append(p)

    put("accuracy.md", "Accuracy\n\n" + markdown_table(reports, "accuracy"))
    put("f1.md", "Macro F1\n\n" + markdown_table(reports, "macro_f1"))
    put("plotdata.csv", plotdata_csv(reports))
    put("metrics.csv", _csv_text([row for r in reports for row in metric_rows(r)]))
    for r in reports:
        for fam in r.results:
            put(f"{r.spec.name}/{fam}/metrics.csv", _csv_text([row for row in metric_rows(r) if row["model"] == fam]))
            put(f"{r.spec.name}/{fam}/confusion.csv", confusion_csv(r, fam))
    manifest = {
        "experiments": [r.echo() for r in reports],
        "cv_summaries": {r.spec.name: {fam: res.cv.summary for fam, res in r.results.items() if res.cv}
                         for r in reports},
        "timings_seconds": {r.spec.name: r.timings for r in reports},
        "nondeterministic": ["timings_seconds"],
    }
    put("manifest.json", json.dumps(manifest, indent=2, ensure_ascii=False, sort_keys=True) + "\n")
    return written


def published_diff_table(reports) -> str:
    """Side-by-side ours / published / delta per cell, for accuracy and F1.

    Only experiments named exp1..exp4 are compared; no tolerance is implied.
    """
    by_name = {r.spec.name: r for r in reports}
    lines = []
    for label, metric, table in (("Accuracy", "accuracy", PUBLISHED_ACCURACY), ("F1", "macro_f1", PUBLISHED_F1)):
        lines.append(f"{label} (ours / published / delta, percent)")
        lines.append("| Model | " + " | ".join(EXPERIMENT_ORDER) + " |")
        lines.append("|---|" + "---|" * len(EXPERIMENT_ORDER))
        for fam in FAMILIES:
            cells = []
            for j, name in enumerate(EXPERIMENT_ORDER):
                ref = table[fam][j]
                r = by_name.get(name)
                if r is None or fam not in r.results:
                    cells.append(f"- / {ref} / -")
                    continue
                ours = percent(getattr(r.results[fam].holdout, metric))
                cells.append(f"{ours} / {ref} / {ours - ref:+d}")
            lines.append(f"| {FAMILY_NAMES[fam]} | " + " | ".join(cells) + " |")
        lines.append("")
    return "\n".join(lines)

import csv
import io
import json
import time

import numpy as np
import pytest

from soranidep.classifiers import FAMILY_NAMES, ModelSpec
from soranidep.classifiers.forest import RfParams
from soranidep.classifiers.svm import SvmParams
from soranidep.corpus_io import Label, class_counts
from soranidep.errors import EmptyReportList, ExperimentFailed, InvalidSpec
from soranidep.evaluation import MetricsReport, metrics_from_confusion
from soranidep.harness import (
    ExperimentReport,
    ModelResult,
    PRESETS,
    preset,
    run_experiment,
    working_set_size,
)
from soranidep.reports import PUBLISHED_ACCURACY, PUBLISHED_F1, markdown_table, published_diff_table, percent, render_reports
from soranidep.synthetic import SyntheticSpec, generate_synthetic_corpus, marker_terms
from soranidep.text import preprocess_corpus

REAL_COUNTS = (363, 369, 179)
FAST = (ModelSpec("svm", SvmParams(epochs=5)), ModelSpec("mnb"), ModelSpec("rf", RfParams(n_trees=5)))


@pytest.fixture(scope="module")
def real_shape_corpus():
    return generate_synthetic_corpus(SyntheticSpec(class_counts=REAL_COUNTS, seed=1))


def test_preset_arithmetic_identities():
    t0 = time.perf_counter()
    expected = {"exp1": 732, "exp2": 911, "exp3": 537, "exp4": 1107}
    for name, size in expected.items():
        assert working_set_size(preset(name, paper_compat=True), REAL_COUNTS) == size
    assert working_set_size(preset("exp4"), REAL_COUNTS) == 911  # train_only scope keeps the working set
    assert time.perf_counter() - t0 < 1.0


@pytest.mark.parametrize("name, compat, working, train_fit", [
    ("exp1", False, 732, 658),
    ("exp2", False, 911, 819),
    ("exp3", True, 537, 483),
    ("exp4", True, 1107, 996),
    ("exp3", False, 911, 483),
    ("exp4", False, 911, 996),
])
def test_run_experiment_sizes(real_shape_corpus, name, compat, working, train_fit):
    spec = preset(name, seed=3, paper_compat=compat, models=FAST[1:2], cv=False)
    rep = run_experiment(spec, real_shape_corpus)
    assert rep.sizes["working_set"] == working
    assert rep.sizes["train"] + rep.sizes["test"] == working
    if compat or PRESETS[name][2] == "none":
        assert rep.sizes["train_after_resampling"] == rep.sizes["train"]
    else:
        # train_only: 90% of each class is resampled after the split
        assert rep.sizes["train_after_resampling"] == train_fit


def test_report_echo_contents():
    echo = preset("exp4", seed=5).echo()
    assert echo["tfidf_variant"].startswith("tf=raw")
    assert echo["resample"] == {"strategy": "oversample", "seed": 7, "scope": "train_only"}
    assert (echo["split_seed"], echo["cv_seed"]) == (5, 6)
    assert {m["family"]: m.get("seed") for m in echo["models"]} == {"svm": 8, "mnb": None, "lr": None, "rf": 9}
    assert echo["models"][3]["n_trees"] == 200
    assert echo["models"][2]["l2_lambda"] == 1e-4


def test_paper_compat_marked_leak_prone():
    assert preset("exp3", paper_compat=True).echo()["resample"]["note"] == "paper-compat (leak-prone)"


def test_cv_attached_per_model(real_shape_corpus):
    rep = run_experiment(preset("exp2", models=FAST[1:2], k=3), real_shape_corpus)
    cv = rep.results["mnb"].cv
    assert len(cv.folds) == 3 and cv.vocab_n_docs == cv.train_sizes
    assert sum(cv.train_sizes) == 2 * rep.sizes["train"]


def test_invalid_specs():
    with pytest.raises(InvalidSpec):
        preset("exp9")
    with pytest.raises(InvalidSpec):
        preset("exp1", models=(ModelSpec("mnb"), ModelSpec("mnb")))


def test_stage_failure_wrapped():
    tiny = generate_synthetic_corpus(SyntheticSpec(class_counts=(3, 3, 1), seed=0))
    with pytest.raises(ExperimentFailed) as e:
        run_experiment(preset("exp2", models=FAST[1:2], k=5), tiny)
    assert e.value.stage == "cv_plan"


# --- synthetic generator ----------------------------------------------------

def test_synthetic_counts_and_determinism():
    spec = SyntheticSpec()
    a = generate_synthetic_corpus(spec)
    assert list(class_counts(a).values()) == [300, 300, 60]
    assert generate_synthetic_corpus(spec).posts == a.posts
    assert generate_synthetic_corpus(SyntheticSpec(seed=43)).posts != a.posts


def test_synthetic_survives_preprocessing():
    a = generate_synthetic_corpus(SyntheticSpec())
    assert len(preprocess_corpus(a)) == len(a)


def test_marker_concentration():
    spec = SyntheticSpec()
    docs = preprocess_corpus(generate_synthetic_corpus(spec))
    for c in range(3):
        markers = set(marker_terms(spec, c))
        owners = [lab for toks, lab in zip(docs.tokens, docs.labels) if markers & set(toks)]
        assert sum(lab == c for lab in owners) / len(owners) >= 0.90


def test_synthetic_invalid():
    with pytest.raises(InvalidSpec):
        generate_synthetic_corpus(SyntheticSpec(class_counts=(5, 0, 5)))


# --- reports ----------------------------------------------------------------

def _fake_report(name, acc_by_family):
    spec = preset(name, cv=False)
    results = {}
    for fam, acc in acc_by_family.items():
        M = np.array([[1, 0], [0, 1]])
        m = metrics_from_confusion(M)
        m = MetricsReport(**{**m.__dict__, "accuracy": acc, "macro_f1": acc})
        results[fam] = ModelResult(fam, m, M, None, 0.0)
    return ExperimentReport(spec, {}, {}, {}, 0, results)


def test_percent_rounding():
    assert percent(0.801) == 80
    assert percent(0.805) == 81
    assert percent(0.8049) == 80


def test_table_shape_and_rounding(tmp_path):
    fams = {"rf": 0.801, "lr": 0.5, "mnb": 0.25, "svm": 1.0}
    reports = [_fake_report(n, fams) for n in PRESETS]
    table = markdown_table(reports, "accuracy").strip().splitlines()
    assert len(table) == 6
    assert [row.split("|")[1].strip() for row in table[2:]] == [FAMILY_NAMES[f] for f in ("svm", "mnb", "lr", "rf")]
    assert all(len(row.split("|")) == 7 for row in table)
    assert "80%" in table[-1]
    render_reports(reports, tmp_path)
    rows = list(csv.DictReader(io.StringIO((tmp_path / "exp1/rf/metrics.csv").read_text())))
    assert rows[0]["accuracy"] == "0.801"
    plot = list(csv.DictReader(io.StringIO((tmp_path / "plotdata.csv").read_text())))
    assert list(plot[0]) == ["experiment", "model", "accuracy", "macro_f1"] and len(plot) == 16
    conf = (tmp_path / "exp2/svm/confusion.csv").read_text().splitlines()
    assert conf[0] == "block,true\\pred,show,not_show,suspicious"[: len(conf[0])]
    manifest = json.loads((tmp_path / "manifest.json").read_text())
    assert manifest["nondeterministic"] == ["timings_seconds"]


def test_empty_report_list(tmp_path):
    with pytest.raises(EmptyReportList):
        render_reports([], tmp_path)


def test_published_tables_and_diff():
    assert PUBLISHED_ACCURACY["rf"][3] == 80 and PUBLISHED_F1["rf"][3] == 80
    assert PUBLISHED_ACCURACY["svm"][0] == 67 and PUBLISHED_F1["mnb"][1] == 45
    text = published_diff_table([_fake_report("exp4", {"rf": 0.801})])
    assert f"| {FAMILY_NAMES['rf']} |" in text and "80 / 80 / +0" in text and "- / 67 / -" in text

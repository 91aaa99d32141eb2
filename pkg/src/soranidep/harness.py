"""The four experiment presets and their end-to-end execution."""

from __future__ import annotations

import time
from dataclasses import asdict, dataclass, field, replace
from typing import Optional, Sequence

import numpy as np

from .classifiers import FAMILIES, ModelSpec, PARAM_TYPES
from .corpus_io import Label, LabeledCorpus, class_counts
from .errors import ExperimentFailed, InvalidSpec, PipelineError
from .evaluation import (
    CvResult,
    MetricsReport,
    confusion_matrix,
    cross_validate,
    metrics_from_confusion,
    stratified_holdout_split,
    stratified_kfold_plan,
)
from .reports import published_diff_table, render_reports
from .resampling import ResamplePlan
from .text import PreprocessOptions, preprocess_corpus
from .tfidf import VARIANT_TAG, fit_vocabulary, transform_many

POLICIES = ("binary_drop_suspicious", "three_class")

PRESETS = {
    "exp1": ("1st Exp.", "binary_drop_suspicious", "none"),
    "exp2": ("2nd Exp.", "three_class", "none"),
    "exp3": ("3rd Exp.", "three_class", "undersample"),
    "exp4": ("4th Exp.", "three_class", "oversample"),
}


def default_models(seed: int = 42) -> tuple[ModelSpec, ...]:
    """All four families at their default hyperparameters; SVM/RF seeds derive from ``seed``."""
    specs = []
    for fam in FAMILIES:
        spec = ModelSpec(fam)
        specs.append(spec.with_seed(seed + 3 if fam == "svm" else seed + 4))
    return tuple(specs)


@dataclass(frozen=True)
class ExperimentSpec:
    name: str
    class_policy: str = "three_class"
    resample: ResamplePlan = ResamplePlan()
    test_fraction: float = 0.1
    k: int = 10
    seed: int = 42
    models: tuple[ModelSpec, ...] = field(default_factory=default_models)
    min_df: int = 1
    cv: bool = True
    preprocess: PreprocessOptions = PreprocessOptions()
    title: str = ""

    def __post_init__(self):
        if self.class_policy not in POLICIES:
            raise InvalidSpec(f"class_policy must be one of {POLICIES}")
        if self.k < 2:
            raise InvalidSpec("k must be >= 2")
        families = [m.family for m in self.models]
        if len(set(families)) != len(families):
            raise InvalidSpec("each model family may appear once per experiment")

    @property
    def n_classes(self) -> int:
        return 2 if self.class_policy == "binary_drop_suspicious" else len(Label)

    @property
    def split_seed(self) -> int:
        return self.seed

    @property
    def cv_seed(self) -> int:
        return self.seed + 1

    def echo(self) -> dict:
        return {
            "name": self.name,
            "title": self.title,
            "class_policy": self.class_policy,
            "resample": self.resample.describe(),
            "test_fraction": self.test_fraction,
            "k": self.k,
            "split_seed": self.split_seed,
            "cv_seed": self.cv_seed,
            "cv": self.cv,
            "min_df": self.min_df,
            "tfidf_variant": VARIANT_TAG,
            "preprocess": asdict(self.preprocess),
            "models": [m.describe() for m in self.models],
            "averaging": "macro (weighted also reported)",
        }


def preset(name: str, seed: int = 42, paper_compat: bool = False, models: Optional[Sequence[ModelSpec]] = None,
           **overrides) -> ExperimentSpec:
    """Experiment ``exp1``..``exp4``.

    Resampling runs on training data only unless ``paper_compat`` is set, in
    which case the whole working set is resampled before splitting.
    """
    if name not in PRESETS:
        raise InvalidSpec(f"unknown preset {name!r}; expected one of {sorted(PRESETS)}")
    title, policy, strategy = PRESETS[name]
    plan = ResamplePlan(strategy, seed + 2, "whole_dataset" if paper_compat else "train_only")
    spec = ExperimentSpec(name, policy, plan, seed=seed, title=title,
                          models=tuple(models) if models is not None else default_models(seed))
    return replace(spec, **overrides) if overrides else spec


def working_set_size(spec: ExperimentSpec, counts: Sequence[int]) -> int:
    """Size of the data the holdout split is drawn from, from per-class counts alone."""
    counts = list(counts)[: spec.n_classes]
    if spec.resample.scope == "whole_dataset":
        if spec.resample.strategy == "undersample":
            return len(counts) * min(counts)
        if spec.resample.strategy == "oversample":
            return len(counts) * max(counts)
    return sum(counts)


@dataclass
class ModelResult:
    family: str
    holdout: MetricsReport
    confusion: np.ndarray
    cv: Optional[CvResult]
    train_seconds: float
    cv_seconds: float = 0.0


@dataclass
class ExperimentReport:
    spec: ExperimentSpec
    sizes: dict
    class_counts: dict
    preprocess_stats: dict
    vocab_size: int
    results: dict = field(default_factory=dict)  # family -> ModelResult
    timings: dict = field(default_factory=dict)

    def echo(self) -> dict:
        return {
            "experiment": self.spec.echo(),
            "sizes": self.sizes,
            "class_counts": self.class_counts,
            "preprocess": self.preprocess_stats,
            "vocab_size": self.vocab_size,
        }


class _Stage:
    def __init__(self, name, timings):
        self.name, self.timings = name, timings

    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, exc_type, exc, tb):
        self.timings[self.name] = self.timings.get(self.name, 0.0) + time.perf_counter() - self.t0
        if exc is not None and isinstance(exc, (PipelineError, ValueError, ArithmeticError)) \
                and not isinstance(exc, ExperimentFailed):
            raise ExperimentFailed(self.name, exc) from exc
        return False


def run_experiment(spec: ExperimentSpec, corpus: LabeledCorpus) -> ExperimentReport:
    """Class policy, preprocessing, split, resampling, TF-IDF, then every model.

    Each model gets holdout metrics on the test split and, when ``spec.cv``,
    a stratified k-fold summary over the (unresampled) training split.
    """
    timings: dict = {}
    sizes: dict = {"collected": len(corpus)}
    C = spec.n_classes

    with _Stage("class_policy", timings):
        if spec.class_policy == "binary_drop_suspicious":
            corpus = corpus.subset([i for i, p in enumerate(corpus.posts) if p.label != Label.SUSPICIOUS],
                                   note="dropped suspicious")
        sizes["after_policy"] = len(corpus)
    with _Stage("preprocess", timings):
        processed = preprocess_corpus(corpus, spec.preprocess)
        docs = processed.tokens
        y = np.asarray(processed.labels, dtype=np.intp)
        sizes["after_preprocess"] = len(docs)
    counts = {lab.token: int(np.sum(y == lab)) for lab in list(Label)[:C]}

    with _Stage("resample_whole", timings):
        if spec.resample.scope == "whole_dataset" and spec.resample.strategy != "none":
            keep = spec.resample.indices(y, n_classes=C)
            docs = [docs[i] for i in keep]
            y = y[keep]
        sizes["working_set"] = len(docs)
    with _Stage("split", timings):
        train_idx, test_idx = stratified_holdout_split(y, spec.test_fraction, spec.split_seed)
        sizes["train"] = len(train_idx)
        sizes["test"] = len(test_idx)
    with _Stage("resample_train", timings):
        fit_idx = train_idx
        if spec.resample.scope == "train_only" and spec.resample.strategy != "none":
            fit_idx = train_idx[spec.resample.indices(y[train_idx], n_classes=C)]
        sizes["train_after_resampling"] = len(fit_idx)
    with _Stage("features", timings):
        train_docs = [docs[i] for i in fit_idx]
        vocab = fit_vocabulary(train_docs, spec.min_df)
        X_train = transform_many(train_docs, vocab)
        X_test = transform_many([docs[i] for i in test_idx], vocab)

    report = ExperimentReport(spec, sizes, counts, processed.stats.as_dict(), len(vocab), timings=timings)
    cv_docs = [docs[i] for i in train_idx]
    cv_y = y[train_idx]
    with _Stage("cv_plan", timings):
        plan = stratified_kfold_plan(cv_y, spec.k, spec.cv_seed) if spec.cv else None
    for mspec in spec.models:
        with _Stage(f"train:{mspec.family}", timings):
            t0 = time.perf_counter()
            model = mspec.fit(X_train, y[fit_idx], C)
            train_s = time.perf_counter() - t0
            pred = model.predict(X_test)
            M = confusion_matrix(y[test_idx], pred, C)
        cv_result, cv_s = None, 0.0
        if plan is not None:
            with _Stage(f"cv:{mspec.family}", timings):
                t0 = time.perf_counter()
                cv_result = cross_validate(mspec, cv_docs, cv_y, plan, spec.resample, spec.min_df, C)
                cv_s = time.perf_counter() - t0
        report.results[mspec.family] = ModelResult(mspec.family, metrics_from_confusion(M), M, cv_result,
                                                   train_s, cv_s)
    return report


def run_paper_suite(corpus: LabeledCorpus, seed: int = 42, paper_compat: bool = False,
                    models: Optional[Sequence[ModelSpec]] = None, **overrides) -> list[ExperimentReport]:
    return [run_experiment(preset(name, seed, paper_compat, models, **overrides), corpus) for name in PRESETS]


def class_count_tuple(corpus: LabeledCorpus) -> tuple[int, ...]:
    counts = class_counts(corpus)
    return tuple(counts[lab] for lab in Label)


__all__ = [
    "ExperimentReport", "ExperimentSpec", "ModelResult", "PARAM_TYPES", "PRESETS", "class_count_tuple",
    "default_models", "published_diff_table", "preset", "render_reports", "run_experiment", "run_paper_suite", "working_set_size",
]

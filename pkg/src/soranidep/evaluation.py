"""Stratified splits, confusion matrices, classification metrics and cross-validation."""

from __future__ import annotations

import statistics
from dataclasses import dataclass, field
from decimal import ROUND_HALF_UP, Decimal
from typing import Optional, Sequence

import numpy as np

from .errors import (
    EmptyClass,
    EmptyMatrix,
    FractionOutOfRange,
    KTooLarge,
    LabelOutOfRange,
    LengthMismatch,
)
from .resampling import ResamplePlan
from .tfidf import fit_vocabulary, transform_many


def _members(y):
    y = np.asarray(y, dtype=np.intp)
    return [np.flatnonzero(y == c) for c in np.unique(y)]


def holdout_count(count: int, test_fraction: float) -> int:
    """Round count*fraction half up, with at least one test sample per class."""
    exact = Decimal(count) * Decimal(str(test_fraction))
    return max(1, int(exact.quantize(Decimal(1), rounding=ROUND_HALF_UP)))


def stratified_holdout_split(y, test_fraction: float = 0.1, seed: int = 0) -> tuple[np.ndarray, np.ndarray]:
    if not 0 < test_fraction < 1:
        raise FractionOutOfRange(f"test_fraction must be in (0, 1), got {test_fraction}")
    members = _members(y)
    if not members:
        raise EmptyClass("no samples to split")
    rng = np.random.default_rng(seed)
    train, test = [], []
    for m in members:
        shuffled = rng.permutation(m)
        k = holdout_count(len(m), test_fraction)
        test.append(shuffled[:k])
        train.append(shuffled[k:])
    return np.sort(np.concatenate(train)), np.sort(np.concatenate(test))


@dataclass(frozen=True)
class FoldPlan:
    k: int
    folds: tuple[np.ndarray, ...]
    seed: int

    def train_indices(self, i: int) -> np.ndarray:
        return np.sort(np.concatenate([f for j, f in enumerate(self.folds) if j != i]))

    def __iter__(self):
        for i, val in enumerate(self.folds):
            yield self.train_indices(i), val


def stratified_kfold_plan(y, k: int = 10, seed: int = 0) -> FoldPlan:
    """Deal each class's shuffled indices round-robin over the folds.

    The dealing position carries over from one class to the next, so total
    fold sizes also differ by at most one.
    """
    n = len(y)
    if k < 2:
        raise ValueError("k must be >= 2")
    if k > n:
        raise KTooLarge(f"k={k} exceeds {n} samples")
    rng = np.random.default_rng(seed)
    buckets: list[list[int]] = [[] for _ in range(k)]
    pos = 0
    for m in _members(y):
        for i in rng.permutation(m):
            buckets[pos % k].append(int(i))
            pos += 1
    return FoldPlan(k, tuple(np.sort(np.asarray(b, dtype=np.intp)) for b in buckets), seed)


def confusion_matrix(y_true, y_pred, n_classes: int) -> np.ndarray:
    """Counts with rows = true class, columns = predicted class."""
    t = np.asarray(y_true, dtype=np.intp).ravel()
    p = np.asarray(y_pred, dtype=np.intp).ravel()
    if len(t) != len(p):
        raise LengthMismatch(f"{len(t)} true labels vs {len(p)} predictions")
    for arr in (t, p):
        if len(arr) and (arr.min() < 0 or arr.max() >= n_classes):
            raise LabelOutOfRange(f"labels must be in [0, {n_classes})")
    M = np.zeros((n_classes, n_classes), dtype=np.int64)
    np.add.at(M, (t, p), 1)
    return M


@dataclass(frozen=True)
class MetricsReport:
    accuracy: float
    precision: tuple[float, ...]
    recall: tuple[float, ...]
    f1: tuple[float, ...]
    support: tuple[int, ...]
    macro_precision: float
    macro_recall: float
    macro_f1: float
    weighted_precision: float
    weighted_recall: float
    weighted_f1: float

    def as_dict(self) -> dict:
        d = {"accuracy": self.accuracy}
        for name in ("macro_precision", "macro_recall", "macro_f1",
                     "weighted_precision", "weighted_recall", "weighted_f1"):
            d[name] = getattr(self, name)
        for name in ("precision", "recall", "f1", "support"):
            for c, v in enumerate(getattr(self, name)):
                d[f"{name}_{c}"] = v
        return d


def _ratio(a, b) -> float:
    return float(a) / float(b) if b else 0.0


def metrics_from_confusion(M) -> MetricsReport:
    """Accuracy and per-class/macro/weighted precision, recall, F1.

    Any metric with a zero denominator is defined as 0.
    """
    M = np.asarray(M, dtype=np.int64)
    total = int(M.sum())
    if total == 0:
        raise EmptyMatrix("confusion matrix has no samples")
    C = M.shape[0]
    diag = np.diag(M)
    rows, cols = M.sum(axis=1), M.sum(axis=0)
    prec = tuple(_ratio(diag[c], cols[c]) for c in range(C))
    rec = tuple(_ratio(diag[c], rows[c]) for c in range(C))
    f1 = tuple(_ratio(2 * p * r, p + r) for p, r in zip(prec, rec))
    support = tuple(int(s) for s in rows)

    def weighted(vals):
        return sum(v * s for v, s in zip(vals, support)) / total

    return MetricsReport(
        accuracy=_ratio(diag.sum(), total),
        precision=prec,
        recall=rec,
        f1=f1,
        support=support,
        macro_precision=sum(prec) / C,
        macro_recall=sum(rec) / C,
        macro_f1=sum(f1) / C,
        weighted_precision=weighted(prec),
        weighted_recall=weighted(rec),
        weighted_f1=weighted(f1),
    )


SUMMARY_METRICS = ("accuracy", "macro_precision", "macro_recall", "macro_f1", "weighted_f1")


@dataclass
class CvResult:
    folds: list[MetricsReport]
    confusions: list[np.ndarray]
    train_sizes: list[int]
    vocab_n_docs: list[int]
    summary: dict = field(default_factory=dict)


def summarize(reports: Sequence[MetricsReport]) -> dict:
    out = {}
    for name in SUMMARY_METRICS:
        vals = [getattr(r, name) for r in reports]
        out[f"{name}_mean"] = statistics.fmean(vals)
        out[f"{name}_std"] = statistics.stdev(vals) if len(vals) > 1 else 0.0
    return out


def cross_validate(trainer, docs, y, plan: FoldPlan, resample: ResamplePlan = ResamplePlan(),
                   min_df: int = 1, n_classes: Optional[int] = None) -> CvResult:
    """Refit vocabulary and model on each fold's training part, score the held-out fold.

    ``trainer`` needs ``fit(X, y, n_classes)`` returning an object with
    ``predict(X)``. Training folds are resampled (fold ``i`` uses seed
    ``resample.seed + i``) unless the plan's scope is ``whole_dataset``, in
    which case the caller already resampled.
    """
    y = np.asarray(y, dtype=np.intp)
    if len(docs) != len(y):
        raise LengthMismatch(f"{len(docs)} docs vs {len(y)} labels")
    C = int(y.max()) + 1 if n_classes is None else n_classes
    result = CvResult([], [], [], [])
    for i, (tr, va) in enumerate(plan):
        if resample.strategy != "none" and resample.scope == "train_only":
            tr = tr[resample.indices(y[tr], seed=resample.seed + i)]
        train_docs = [docs[j] for j in tr]
        vocab = fit_vocabulary(train_docs, min_df)
        model = trainer.fit(transform_many(train_docs, vocab), y[tr], C)
        pred = model.predict(transform_many([docs[j] for j in va], vocab))
        M = confusion_matrix(y[va], pred, C)
        result.folds.append(metrics_from_confusion(M))
        result.confusions.append(M)
        result.train_sizes.append(len(tr))
        result.vocab_n_docs.append(vocab.n_docs)
    result.summary = summarize(result.folds)
    return result

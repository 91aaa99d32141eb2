"""JSON model container.

Layout (one JSON object)::

    {"format": "soranidep-model", "format_version": 1, "family": "mnb|lr|svm|rf",
     "hyperparameters": {...}, "vocabulary_tsv": "<TSV block or null>",
     "metadata": {...}, "parameters": {<family-specific arrays>}}

Floats are written with ``repr`` precision, so a reload reproduces every
parameter bit for bit. Infinite values use JSON's ``Infinity`` extension.
"""

from __future__ import annotations

import json
from dataclasses import asdict
from pathlib import Path

import numpy as np

from ..errors import CorruptModel, IoFailure, VersionMismatch
from ..tfidf import Vocabulary
from .forest import RfModel, RfParams, Tree
from .logreg import LinearLrModel
from .mnb import MnbModel
from .svm import SvmOvrModel

FORMAT_TAG = "soranidep-model"
FORMAT_VERSION = 1


def _f(a):
    return np.asarray(a, dtype=np.float64).tolist()


def _params_of(m) -> tuple[dict, dict]:
    if isinstance(m, MnbModel):
        return {"alpha": m.alpha}, {"log_prior": _f(m.log_prior), "log_likelihood": _f(m.log_likelihood),
                                    "class_count": m.class_count.tolist()}
    if isinstance(m, LinearLrModel):
        return {"l2_lambda": m.l2_lambda}, {"weights": _f(m.weights), "bias": _f(m.bias), "n_iter": m.n_iter,
                                            "objective_trace": _f(m.objective_trace)}
    if isinstance(m, SvmOvrModel):
        return ({"l2_lambda": m.l2_lambda, "epochs": m.epochs, "seed": m.seed},
                {"weights": _f(m.weights), "bias": _f(m.bias), "objective_trace": [_f(t) for t in m.objective_trace]})
    if isinstance(m, RfModel):
        trees = [{"feature": t.feature.tolist(), "threshold": _f(t.threshold), "left": t.left.tolist(),
                  "right": t.right.tolist(), "value": t.value.tolist(), "depth": t.depth.tolist()} for t in m.trees]
        return asdict(m.params), {"n_classes": m.n_classes, "n_features": m.n_features, "trees": trees}
    raise TypeError(f"not a model: {type(m).__name__}")


def save_model(model, path) -> None:
    from . import TrainedModel

    if not isinstance(model, TrainedModel):
        model = TrainedModel(model)
    hyper, params = _params_of(model.model)
    doc = {
        "format": FORMAT_TAG,
        "format_version": FORMAT_VERSION,
        "family": model.family,
        "hyperparameters": hyper,
        "vocabulary_tsv": model.vocabulary.to_tsv() if model.vocabulary is not None else None,
        "metadata": model.metadata,
        "parameters": params,
    }
    try:
        Path(path).write_text(json.dumps(doc, ensure_ascii=False), encoding="utf-8")
    except OSError as e:
        raise IoFailure(str(e)) from e


def _build(family, hyper, p):
    a = np.asarray
    if family == "mnb":
        return MnbModel(a(p["log_prior"], float), a(p["log_likelihood"], float), float(hyper["alpha"]),
                        a(p["class_count"], np.int64))
    if family == "lr":
        return LinearLrModel(a(p["weights"], float), a(p["bias"], float), float(hyper["l2_lambda"]),
                             int(p["n_iter"]), list(p["objective_trace"]))
    if family == "svm":
        return SvmOvrModel(a(p["weights"], float), a(p["bias"], float), float(hyper["l2_lambda"]),
                           int(hyper["epochs"]), int(hyper["seed"]), [list(t) for t in p["objective_trace"]])
    if family == "rf":
        C = int(p["n_classes"])
        trees = [Tree(a(t["feature"], np.intp), a(t["threshold"], float), a(t["left"], np.intp),
                      a(t["right"], np.intp), a(t["value"], np.int64).reshape(-1, C), a(t["depth"], np.intp))
                 for t in p["trees"]]
        return RfModel(trees, C, int(p["n_features"]), RfParams(**hyper))
    raise CorruptModel(f"unknown family {family!r}")


def load_model(path):
    from . import TrainedModel

    try:
        raw = Path(path).read_text(encoding="utf-8")
    except FileNotFoundError as e:
        raise IoFailure(str(e)) from e
    try:
        doc = json.loads(raw)
    except (json.JSONDecodeError, UnicodeDecodeError) as e:
        raise CorruptModel(f"{path}: {e}") from e
    if not isinstance(doc, dict) or doc.get("format") != FORMAT_TAG:
        raise CorruptModel(f"{path}: not a {FORMAT_TAG} file")
    version = doc.get("format_version")
    if version != FORMAT_VERSION:
        raise VersionMismatch(f"{path}: format_version {version!r}, expected {FORMAT_VERSION}")
    try:
        model = _build(doc["family"], doc["hyperparameters"], doc["parameters"])
        vtsv = doc.get("vocabulary_tsv")
        vocab = Vocabulary.from_tsv(vtsv) if vtsv is not None else None
    except (KeyError, TypeError, ValueError) as e:
        raise CorruptModel(f"{path}: {e}") from e
    if vocab is not None and len(vocab) != model.n_features:
        raise CorruptModel(f"{path}: vocabulary size {len(vocab)} != model width {model.n_features}")
    return TrainedModel(model, vocab, doc.get("metadata") or {})

"""The four supervised text classifiers plus a uniform fit/predict/persist surface."""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from typing import Any, Optional, Union

import numpy as np

from ..tfidf import Vocabulary
from ._common import as_csr
from .forest import RfModel, RfParams, Tree, gini, train_random_forest
from .logreg import LinearLrModel, LrParams, train_logreg
from .mnb import MnbModel, MnbParams, train_mnb
from .svm import SvmOvrModel, SvmParams, train_linear_svm

FAMILIES = ("svm", "mnb", "lr", "rf")
FAMILY_NAMES = {
    "svm": "Support Vector Machine",
    "mnb": "Multinomial Naive Bayes",
    "lr": "Logistic Regression",
    "rf": "Random Forest",
}
PARAM_TYPES = {"mnb": MnbParams, "lr": LrParams, "svm": SvmParams, "rf": RfParams}

FamilyModel = Union[MnbModel, LinearLrModel, SvmOvrModel, RfModel]


@dataclass(frozen=True)
class ModelSpec:
    """A model family plus its hyperparameters; ``fit`` trains a fresh model."""

    family: str
    params: Any = None

    def __post_init__(self):
        if self.family not in PARAM_TYPES:
            raise ValueError(f"unknown model family {self.family!r}")
        if self.params is None:
            object.__setattr__(self, "params", PARAM_TYPES[self.family]())

    def fit(self, X, y, n_classes: Optional[int] = None) -> FamilyModel:
        p = self.params
        if self.family == "mnb":
            return train_mnb(X, y, p.alpha, n_classes=n_classes)
        if self.family == "lr":
            return train_logreg(X, y, p.l2_lambda, p.learning_rate, p.max_iters, p.tol, n_classes=n_classes)
        if self.family == "svm":
            return train_linear_svm(X, y, p.l2_lambda, p.epochs, p.seed, n_classes=n_classes)
        return train_random_forest(X, y, p.n_trees, p.max_depth, p.m_features, p.min_leaf, p.seed,
                                   p.bootstrap, n_classes=n_classes)

    def with_seed(self, seed: int) -> "ModelSpec":
        if not hasattr(self.params, "seed"):
            return self
        return ModelSpec(self.family, type(self.params)(**{**asdict(self.params), "seed": seed}))

    def describe(self) -> dict:
        return {"family": self.family, **asdict(self.params)}


@dataclass
class TrainedModel:
    """A fitted family model bundled with the vocabulary its features came from."""

    model: FamilyModel
    vocabulary: Optional[Vocabulary] = None
    metadata: dict = field(default_factory=dict)

    @property
    def family(self) -> str:
        return self.model.family

    @property
    def n_features(self) -> int:
        return self.model.n_features


def _unwrap(model) -> FamilyModel:
    return model.model if isinstance(model, TrainedModel) else model


def predict_labels(model, X) -> np.ndarray:
    """Argmax of the family's scores; ties go to the lowest class code."""
    m = _unwrap(model)
    return m.predict(as_csr(X, m.n_features))


def predict_scores(model, X) -> np.ndarray:
    """Posteriors for NB/LR, vote fractions for RF, raw margins for SVM."""
    m = _unwrap(model)
    return m.scores(as_csr(X, m.n_features))


from .model_io import FORMAT_VERSION, load_model, save_model  # noqa: E402

__all__ = [
    "FAMILIES", "FAMILY_NAMES", "FORMAT_VERSION", "LinearLrModel", "LrParams", "MnbModel", "MnbParams",
    "ModelSpec", "RfModel", "RfParams", "SvmOvrModel", "SvmParams", "TrainedModel", "Tree", "gini",
    "load_model", "predict_labels", "predict_scores", "save_model", "train_linear_svm", "train_logreg",
    "train_mnb", "train_random_forest",
]

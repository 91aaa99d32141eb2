"""Multinomial naive Bayes over nonnegative (possibly fractional) term weights."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import NegativeFeature
from ._common import argmax_rows, as_csr, check_xy, softmax_rows


@dataclass(frozen=True)
class MnbParams:
    alpha: float = 1.0


@dataclass
class MnbModel:
    log_prior: np.ndarray  # (C,)
    log_likelihood: np.ndarray  # (C, V)
    alpha: float
    class_count: np.ndarray  # (C,)

    family = "mnb"

    @property
    def n_classes(self) -> int:
        return len(self.log_prior)

    @property
    def n_features(self) -> int:
        return self.log_likelihood.shape[1]

    def joint_log_likelihood(self, X) -> np.ndarray:
        X = as_csr(X, self.n_features)
        return np.asarray(X @ self.log_likelihood.T) + self.log_prior

    def scores(self, X) -> np.ndarray:
        """Class posteriors; rows sum to one."""
        return softmax_rows(self.joint_log_likelihood(X))

    def predict(self, X) -> np.ndarray:
        return argmax_rows(self.joint_log_likelihood(X))


def train_mnb(X, y, alpha: float = 1.0, n_classes: int | None = None) -> MnbModel:
    """Estimate priors and per-class term distributions with additive smoothing.

    Feature weights act as soft counts: P(t|c) = (W_tc + alpha) / (W_c + alpha*V).
    Classes with no training samples get a log prior of -inf.
    """
    if not alpha > 0:
        raise ValueError("alpha must be > 0")
    X, y, C = check_xy(X, y, n_classes)
    if X.nnz and X.data.min() < 0:
        raise NegativeFeature("multinomial NB needs nonnegative features")
    V = X.shape[1]
    onehot = np.zeros((len(y), C))
    onehot[np.arange(len(y)), y] = 1.0
    W = np.asarray((X.T @ onehot).T)  # (C, V)
    smoothed = W + alpha
    log_lik = np.log(smoothed) - np.log(smoothed.sum(axis=1, keepdims=True))
    counts = onehot.sum(axis=0)
    with np.errstate(divide="ignore"):
        log_prior = np.log(counts / len(y))
    return MnbModel(log_prior, log_lik, float(alpha), counts.astype(np.int64))

"""Multinomial logistic regression trained by full-batch gradient descent."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import NonFiniteObjective
from ._common import argmax_rows, as_csr, check_xy, softmax_rows


@dataclass(frozen=True)
class LrParams:
    l2_lambda: float = 1e-4
    learning_rate: float = 0.5
    max_iters: int = 1000
    tol: float = 1e-7


@dataclass
class LinearLrModel:
    weights: np.ndarray  # (C, V)
    bias: np.ndarray  # (C,)
    l2_lambda: float
    n_iter: int = 0
    objective_trace: list = field(default_factory=list)

    family = "lr"

    @property
    def n_classes(self) -> int:
        return len(self.bias)

    @property
    def n_features(self) -> int:
        return self.weights.shape[1]

    def decision_function(self, X) -> np.ndarray:
        X = as_csr(X, self.n_features)
        return np.asarray(X @ self.weights.T) + self.bias

    def scores(self, X) -> np.ndarray:
        return softmax_rows(self.decision_function(X))

    def predict(self, X) -> np.ndarray:
        return argmax_rows(self.decision_function(X))


def _log_softmax(z):
    z = z - z.max(axis=1, keepdims=True)
    return z - np.log(np.exp(z).sum(axis=1, keepdims=True))


def objective(W, b, X, Y, l2_lambda) -> float:
    """Mean cross-entropy plus (lambda/2)||W||^2; the bias is not penalized."""
    logp = _log_softmax(np.asarray(X @ W.T) + b)
    return float(-(Y * logp).sum() / X.shape[0] + 0.5 * l2_lambda * np.sum(W * W))


def gradient(W, b, X, Y, l2_lambda):
    n = X.shape[0]
    R = softmax_rows(np.asarray(X @ W.T) + b) - Y
    gW = np.asarray((X.T @ R).T) / n + l2_lambda * W
    gb = R.sum(axis=0) / n
    return gW, gb


def one_hot(y, n_classes) -> np.ndarray:
    Y = np.zeros((len(y), n_classes))
    Y[np.arange(len(y)), y] = 1.0
    return Y


def train_logreg(
    X,
    y,
    l2_lambda: float = 1e-4,
    learning_rate: float = 0.5,
    max_iters: int = 1000,
    tol: float = 1e-7,
    n_classes: int | None = None,
) -> LinearLrModel:
    """Gradient descent with step halving whenever a step would raise the objective.

    Stops after ``max_iters`` accepted steps or once an accepted step improves
    the objective by less than ``tol``. The step size only ever shrinks.
    """
    if max_iters < 0:
        raise ValueError("max_iters must be >= 0")
    X, y, C = check_xy(X, y, n_classes)
    Y = one_hot(y, C)
    W = np.zeros((C, X.shape[1]))
    b = np.zeros(C)
    J = objective(W, b, X, Y, l2_lambda)
    if not np.isfinite(J):
        raise NonFiniteObjective(f"initial objective is {J}")
    trace = [J]
    step = float(learning_rate)
    it = 0
    while it < max_iters:
        gW, gb = gradient(W, b, X, Y, l2_lambda)
        for _ in range(60):
            W_new, b_new = W - step * gW, b - step * gb
            J_new = objective(W_new, b_new, X, Y, l2_lambda)
            if np.isnan(J_new):
                raise NonFiniteObjective(f"objective became {J_new} at iteration {it}")
            if J_new <= J:
                break
            step *= 0.5
        else:
            break  # no descent step found; we are at numerical optimum
        W, b = W_new, b_new
        improvement = J - J_new
        J = J_new
        trace.append(J)
        it += 1
        if improvement < tol:
            break
    return LinearLrModel(W, b, float(l2_lambda), it, trace)

"""One-vs-rest linear SVM trained with Pegasos-style primal subgradient steps."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ._common import argmax_rows, as_csr, check_xy


@dataclass(frozen=True)
class SvmParams:
    l2_lambda: float = 1e-4
    epochs: int = 50
    seed: int = 0


@dataclass
class SvmOvrModel:
    weights: np.ndarray  # (C, V)
    bias: np.ndarray  # (C,); -inf for classes absent at training time
    l2_lambda: float
    epochs: int
    seed: int
    objective_trace: list = field(default_factory=list)  # per class, one value per epoch

    family = "svm"

    @property
    def n_classes(self) -> int:
        return len(self.bias)

    @property
    def n_features(self) -> int:
        return self.weights.shape[1]

    def scores(self, X) -> np.ndarray:
        """Raw margins, not probabilities."""
        X = as_csr(X, self.n_features)
        return np.asarray(X @ self.weights.T) + self.bias

    def predict(self, X) -> np.ndarray:
        return argmax_rows(self.scores(X))


def hinge_objective(w, b, X, s, l2_lambda) -> float:
    """(lambda/2)(||w||^2 + b^2) + mean hinge loss for targets ``s`` in {-1, +1}."""
    margins = s * (np.asarray(X @ w).ravel() + b)
    return float(0.5 * l2_lambda * (w @ w + b * b) + np.maximum(0.0, 1.0 - margins).mean())


def _pegasos(X, s, l2_lambda, epochs, rng):
    # w is stored as scale * v so the (1 - eta*lambda) shrink costs O(1);
    # the bias is an extra always-one feature at index V.
    n, V = X.shape
    indptr, indices, data = X.indptr, X.indices, X.data
    rows = [(indices[indptr[i]:indptr[i + 1]], data[indptr[i]:indptr[i + 1]]) for i in range(n)]
    v = np.zeros(V)
    vb = 0.0
    scale = 1.0
    t = 0
    trace = []
    for _ in range(epochs):
        for i in rng.permutation(n):
            t += 1
            eta = 1.0 / (l2_lambda * t)
            idx, val = rows[i]
            margin = s[i] * scale * (v[idx] @ val + vb)
            shrink = 1.0 - eta * l2_lambda
            if shrink <= 0.0:
                v[:] = 0.0
                vb = 0.0
                scale = 1.0
            else:
                scale *= shrink
            if margin < 1.0:
                step = eta * s[i] / scale
                v[idx] += step * val
                vb += step
        trace.append(hinge_objective(scale * v, scale * vb, X, s, l2_lambda))
    return scale * v, scale * vb, trace


def train_linear_svm(X, y, l2_lambda: float = 1e-4, epochs: int = 50, seed: int = 0,
                     n_classes: int | None = None) -> SvmOvrModel:
    """Fit one hinge-loss hyperplane per class against the rest.

    Class ``c`` shuffles with a generator seeded ``seed + c``, so classes can
    be trained independently and still reproduce a sequential run.
    """
    if epochs < 1:
        raise ValueError("epochs must be >= 1")
    if not l2_lambda > 0:
        raise ValueError("l2_lambda must be > 0")
    X, y, C = check_xy(X, y, n_classes)
    W = np.zeros((C, X.shape[1]))
    b = np.full(C, -np.inf)
    traces = []
    for c in range(C):
        if not np.any(y == c):
            traces.append([])
            continue
        s = np.where(y == c, 1.0, -1.0)
        W[c], b[c], tr = _pegasos(X, s, l2_lambda, epochs, np.random.default_rng(seed + c))
        traces.append(tr)
    return SvmOvrModel(W, b, float(l2_lambda), int(epochs), int(seed), traces)

from __future__ import annotations

import numpy as np
import scipy.sparse as sp

from ..errors import DimensionMismatch, EmptyTrainingSet, LengthMismatch


def as_csr(X, n_cols: int | None = None) -> sp.csr_matrix:
    """Accept a FeatureMatrix, scipy sparse matrix or dense array."""
    if hasattr(X, "csr"):
        X = X.csr
    if sp.issparse(X):
        X = sp.csr_matrix(X, dtype=np.float64)
    else:
        X = sp.csr_matrix(np.atleast_2d(np.asarray(X, dtype=np.float64)))
    if n_cols is not None and X.shape[1] != n_cols:
        raise DimensionMismatch(f"feature width {X.shape[1]} != model width {n_cols}")
    return X


def check_xy(X, y, n_classes: int | None):
    X = as_csr(X)
    y = np.asarray(y, dtype=np.intp).ravel()
    if X.shape[0] != len(y):
        raise LengthMismatch(f"{X.shape[0]} rows but {len(y)} labels")
    if len(y) == 0:
        raise EmptyTrainingSet("no training samples")
    if y.min() < 0:
        raise ValueError("labels must be nonnegative class codes")
    if n_classes is None:
        n_classes = int(y.max()) + 1
    elif y.max() >= n_classes:
        raise ValueError(f"label {y.max()} >= n_classes {n_classes}")
    return X, y, n_classes


def argmax_rows(scores: np.ndarray) -> np.ndarray:
    # np.argmax returns the first maximum, i.e. the lowest class code on ties
    return np.argmax(scores, axis=1).astype(np.intp)


def softmax_rows(z: np.ndarray) -> np.ndarray:
    z = z - z.max(axis=1, keepdims=True)
    e = np.exp(z)
    return e / e.sum(axis=1, keepdims=True)

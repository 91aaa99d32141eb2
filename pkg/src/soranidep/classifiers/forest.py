"""Random forest of Gini-split decision trees on bootstrap samples."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ._common import argmax_rows, as_csr, check_xy
from ._tree_kernel import grow_tree

LEAF = -1


@dataclass(frozen=True)
class RfParams:
    n_trees: int = 200
    max_depth: Optional[int] = None
    m_features: Optional[int] = None  # None -> ceil(sqrt(V))
    min_leaf: int = 1
    seed: int = 0
    bootstrap: bool = True


@dataclass
class Tree:
    """Flat array tree. ``feature[i] == LEAF`` marks leaves; rows go left when x <= threshold."""

    feature: np.ndarray
    threshold: np.ndarray
    left: np.ndarray
    right: np.ndarray
    value: np.ndarray  # (n_nodes, C) class counts of the node's training samples
    depth: np.ndarray

    @property
    def n_nodes(self) -> int:
        return len(self.feature)

    @property
    def max_depth(self) -> int:
        return int(self.depth.max())

    def apply(self, Xd: np.ndarray) -> np.ndarray:
        """Leaf index reached by each row of a dense matrix."""
        node = np.zeros(Xd.shape[0], dtype=np.intp)
        rows = np.arange(Xd.shape[0])
        active = self.feature[node] != LEAF
        while active.any():
            r = rows[active]
            nd = node[r]
            go_left = Xd[r, self.feature[nd]] <= self.threshold[nd]
            node[r] = np.where(go_left, self.left[nd], self.right[nd])
            active = self.feature[node] != LEAF
        return node

    def predict(self, Xd: np.ndarray) -> np.ndarray:
        return argmax_rows(self.value[self.apply(Xd)])


def gini(counts) -> float:
    counts = np.asarray(counts, dtype=np.float64)
    n = counts.sum()
    if n == 0:
        return 0.0
    p = counts / n
    return float(1.0 - np.sum(p * p))


def build_tree(Xf: np.ndarray, y: np.ndarray, sample: np.ndarray, n_classes: int,
               max_depth: Optional[int], m_features: int, min_leaf: int, seed: int) -> Tree:
    """Grow one tree on the rows listed in ``sample`` (duplicates allowed).

    At each node ``m_features`` features are drawn among those not constant on
    the node's samples; the node becomes a leaf when pure, at ``max_depth``, too
    small to give both children ``min_leaf`` samples, or when every feature is
    constant there.
    """
    arrays = grow_tree(np.asfortranarray(Xf, dtype=np.float64), np.asarray(y, np.int64),
                       np.asarray(sample, np.int64), int(n_classes),
                       -1 if max_depth is None else int(max_depth), int(m_features), int(min_leaf),
                       np.uint64(seed))
    return Tree(*arrays)


@dataclass
class RfModel:
    trees: list
    n_classes: int
    n_features: int
    params: RfParams

    family = "rf"

    def votes(self, X) -> np.ndarray:
        Xd = as_csr(X, self.n_features).toarray()
        counts = np.zeros((Xd.shape[0], self.n_classes))
        rows = np.arange(Xd.shape[0])
        for tree in self.trees:
            np.add.at(counts, (rows, tree.predict(Xd)), 1.0)
        return counts

    def scores(self, X) -> np.ndarray:
        """Fraction of trees voting for each class."""
        return self.votes(X) / len(self.trees)

    def predict(self, X) -> np.ndarray:
        return argmax_rows(self.votes(X))


def default_m_features(n_features: int) -> int:
    return max(1, math.ceil(math.sqrt(n_features)))


def train_random_forest(X, y, n_trees: int = 200, max_depth: Optional[int] = None,
                        m_features: Optional[int] = None, min_leaf: int = 1, seed: int = 0,
                        bootstrap: bool = True, n_classes: int | None = None) -> RfModel:
    """Tree ``t`` draws its bootstrap sample and features from a generator seeded ``seed + t``."""
    if n_trees < 1:
        raise ValueError("n_trees must be >= 1")
    if min_leaf < 1:
        raise ValueError("min_leaf must be >= 1")
    Xcsr, y, C = check_xy(X, y, n_classes)
    n, V = Xcsr.shape
    m = default_m_features(V) if m_features is None else int(m_features)
    if not 1 <= m <= V:
        raise ValueError(f"m_features must be in [1, {V}]")
    Xf = np.asfortranarray(Xcsr.toarray())
    trees = []
    for t in range(n_trees):
        rng = np.random.default_rng(seed + t)
        sample = np.sort(rng.integers(0, n, size=n)) if bootstrap else np.arange(n)
        kernel_seed = int(rng.integers(0, 2**63))
        trees.append(build_tree(Xf, y, sample, C, max_depth, m, min_leaf, kernel_seed))
    params = RfParams(n_trees, max_depth, m_features, min_leaf, seed, bootstrap)
    return RfModel(trees, C, V, params)

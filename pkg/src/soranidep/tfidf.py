"""TF-IDF vocabulary fitting and sparse, L2-normalized document vectors.

Weighting: raw term counts times smoothed idf ``ln((1+N)/(1+df)) + 1``,
then each row scaled to unit Euclidean norm.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
import scipy.sparse as sp

from .errors import DimensionMismatch, EmptyCorpus, EmptyVocabulary

VARIANT_TAG = "tf=raw;idf=ln((1+N)/(1+df))+1;norm=l2"


@dataclass(frozen=True)
class Vocabulary:
    term_to_index: dict[str, int]
    doc_freq: tuple[int, ...]
    n_docs: int

    def __len__(self) -> int:
        return len(self.doc_freq)

    @property
    def terms(self) -> list[str]:
        out = [""] * len(self)
        for t, i in self.term_to_index.items():
            out[i] = t
        return out

    def idf(self) -> np.ndarray:
        df = np.asarray(self.doc_freq, dtype=np.float64)
        return np.log((1.0 + self.n_docs) / (1.0 + df)) + 1.0

    def to_tsv(self) -> str:
        lines = [f"#n_docs={self.n_docs}"]
        for i, t in enumerate(self.terms):
            lines.append(f"{t}\t{i}\t{self.doc_freq[i]}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_tsv(cls, text: str) -> "Vocabulary":
        lines = text.splitlines()
        if not lines or not lines[0].startswith("#n_docs="):
            raise ValueError("vocabulary TSV must start with '#n_docs=<N>'")
        n_docs = int(lines[0][len("#n_docs="):])
        rows = [ln.split("\t") for ln in lines[1:] if ln]
        df = [0] * len(rows)
        t2i = {}
        for term, idx, freq in rows:
            t2i[term] = int(idx)
            df[int(idx)] = int(freq)
        if sorted(t2i.values()) != list(range(len(rows))):
            raise ValueError("vocabulary indices are not a permutation of 0..V-1")
        return cls(t2i, tuple(df), n_docs)


@dataclass(frozen=True)
class SparseVector:
    indices: tuple[int, ...]
    weights: tuple[float, ...]

    def __len__(self):
        return len(self.indices)

    def norm(self) -> float:
        return math.sqrt(sum(w * w for w in self.weights))


class FeatureMatrix:
    """Row-major sparse TF-IDF matrix; a thin wrapper around a CSR array."""

    def __init__(self, csr: sp.csr_matrix):
        self.csr = sp.csr_matrix(csr, dtype=np.float64)
        self.csr.sort_indices()

    @property
    def n_cols(self) -> int:
        return self.csr.shape[1]

    @property
    def shape(self):
        return self.csr.shape

    def __len__(self) -> int:
        return self.csr.shape[0]

    def row(self, i: int) -> SparseVector:
        a, b = self.csr.indptr[i], self.csr.indptr[i + 1]
        return SparseVector(tuple(int(j) for j in self.csr.indices[a:b]), tuple(float(w) for w in self.csr.data[a:b]))

    @property
    def rows(self) -> list[SparseVector]:
        return [self.row(i) for i in range(len(self))]

    def take(self, idx) -> "FeatureMatrix":
        return FeatureMatrix(self.csr[np.asarray(idx, dtype=np.intp)])

    def toarray(self) -> np.ndarray:
        return self.csr.toarray()

    @classmethod
    def from_rows(cls, rows: Sequence[SparseVector], n_cols: int) -> "FeatureMatrix":
        indptr = [0]
        indices, data = [], []
        for r in rows:
            if r.indices and max(r.indices) >= n_cols:
                raise DimensionMismatch(f"index {max(r.indices)} >= n_cols {n_cols}")
            indices.extend(r.indices)
            data.extend(r.weights)
            indptr.append(len(indices))
        return cls(sp.csr_matrix((np.asarray(data, float), np.asarray(indices, np.intp), np.asarray(indptr, np.intp)),
                                 shape=(len(rows), n_cols)))


def fit_vocabulary(docs: Sequence[Sequence[str]], min_df: int = 1) -> Vocabulary:
    if len(docs) == 0:
        raise EmptyCorpus("cannot fit a vocabulary on zero documents")
    if min_df < 1:
        raise ValueError("min_df must be >= 1")
    df: Counter = Counter()
    first_seen: dict[str, int] = {}
    for doc in docs:
        for t in dict.fromkeys(doc):
            df[t] += 1
            first_seen.setdefault(t, len(first_seen))
    kept = [t for t in first_seen if df[t] >= min_df]
    if not kept:
        raise EmptyVocabulary(f"no term appears in >= {min_df} documents")
    return Vocabulary({t: i for i, t in enumerate(kept)}, tuple(df[t] for t in kept), len(docs))


def _weights(doc: Iterable[str], vocab: Vocabulary, idf: np.ndarray) -> tuple[list[int], np.ndarray]:
    t2i = vocab.term_to_index
    tf = Counter(t2i[t] for t in doc if t in t2i)
    idx = sorted(tf)
    w = np.array([tf[i] * idf[i] for i in idx], dtype=np.float64)
    if len(w):
        w /= np.sqrt(np.dot(w, w))
    return idx, w


def transform(doc: Sequence[str], vocab: Vocabulary) -> SparseVector:
    idx, w = _weights(doc, vocab, vocab.idf())
    return SparseVector(tuple(idx), tuple(float(x) for x in w))


def transform_many(docs: Sequence[Sequence[str]], vocab: Vocabulary) -> FeatureMatrix:
    idf = vocab.idf()
    indptr = [0]
    indices: list[int] = []
    data: list[np.ndarray] = []
    for doc in docs:
        idx, w = _weights(doc, vocab, idf)
        indices.extend(idx)
        data.append(w)
        indptr.append(len(indices))
    values = np.concatenate(data) if data else np.zeros(0)
    csr = sp.csr_matrix((values, np.asarray(indices, np.intp), np.asarray(indptr, np.intp)),
                        shape=(len(docs), len(vocab)))
    return FeatureMatrix(csr)


def fit_transform(docs: Sequence[Sequence[str]], min_df: int = 1) -> tuple[Vocabulary, FeatureMatrix]:
    vocab = fit_vocabulary(docs, min_df)
    return vocab, transform_many(docs, vocab)

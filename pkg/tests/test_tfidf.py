import math
import random

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import dense_tfidf
from soranidep.errors import EmptyCorpus, EmptyVocabulary
from soranidep.tfidf import Vocabulary, fit_transform, fit_vocabulary, transform, transform_many

IDF_B = 1.4054651081081644  # ln(3/2) + 1
NORM_AB = (1 / math.hypot(1, IDF_B), IDF_B / math.hypot(1, IDF_B))


def random_corpus(rng, max_docs=20, max_terms=30):
    V = rng.randint(1, max_terms)
    terms = [f"t{j}" for j in range(V)]
    return [[rng.choice(terms) for _ in range(rng.randint(0, 12))] for _ in range(rng.randint(1, max_docs))]


def test_small_vocabulary():
    v = fit_vocabulary([["a", "b"], ["a"]])
    assert v.term_to_index == {"a": 0, "b": 1}
    assert v.doc_freq == (2, 1) and v.n_docs == 2
    assert fit_vocabulary([["a", "b"], ["a"]], min_df=2).terms == ["a"]


def test_hand_idf_and_weights():
    v = fit_vocabulary([["a", "b"], ["a"]])
    assert v.idf()[0] == 1.0
    assert v.idf()[1] == pytest.approx(IDF_B, abs=1e-15)
    vec = transform(["a", "b"], v)
    assert vec.indices == (0, 1)
    assert vec.weights == pytest.approx(NORM_AB, abs=1e-15)
    assert vec.weights == pytest.approx((0.5797, 0.8148), abs=1e-4)


def test_oov_doc_is_empty():
    v = fit_vocabulary([["a", "b"], ["a"]])
    assert len(transform(["z"], v)) == 0


def test_fit_transform_matches_per_doc():
    docs = [["a", "b"], ["a"]]
    v, X = fit_transform(docs)
    for i, d in enumerate(docs):
        assert X.row(i) == transform(d, v)
    assert X.shape == (2, 2)


def test_identical_docs_identical_rows():
    _, X = fit_transform([["x", "y", "x"]] * 4)
    dense = X.toarray()
    assert (dense == dense[0]).all()


def test_errors():
    with pytest.raises(EmptyCorpus):
        fit_vocabulary([])
    with pytest.raises(EmptyVocabulary):
        fit_vocabulary([["a"], ["b"]], min_df=2)


def test_doc_freq_brute_force():
    rng = random.Random(3)
    docs = [[f"w{rng.randrange(40)}" for _ in range(rng.randint(0, 10))] for _ in range(100)]
    v = fit_vocabulary(docs)
    for t, i in v.term_to_index.items():
        assert v.doc_freq[i] == sum(t in set(d) for d in docs)


def test_row_count_matches_doc_count():
    rng = random.Random(4)
    for _ in range(50):
        docs = random_corpus(rng)
        if not any(docs):
            continue
        assert fit_transform(docs)[1].shape[0] == len(docs)


def test_dense_oracle_200_cases():
    rng = random.Random(11)
    worst, done = 0.0, 0
    while done < 200:
        docs = random_corpus(rng)
        if not any(docs):
            continue
        terms, df, dense = dense_tfidf(docs)
        v, X = fit_transform(docs)
        assert v.terms == terms and list(v.doc_freq) == df
        worst = max(worst, float(np.abs(X.toarray() - dense).max()))
        done += 1
    assert worst < 1e-12


_docs = st.lists(st.lists(st.sampled_from("abcdefg"), max_size=10), min_size=1, max_size=12).filter(
    lambda ds: any(ds))


@given(_docs)
def test_unit_norm_rows(docs):
    _, X = fit_transform(docs)
    norms = np.sqrt(np.asarray(X.csr.multiply(X.csr).sum(axis=1)).ravel())
    for d, n in zip(docs, norms):
        assert n == pytest.approx(1.0, abs=1e-9) if d else n == 0.0


@given(_docs)
def test_idf_monotone_in_df(docs):
    v = fit_vocabulary(docs)
    idf = v.idf()
    for i in range(len(v)):
        for j in range(len(v)):
            if v.doc_freq[i] < v.doc_freq[j]:
                assert idf[i] > idf[j]


@given(_docs, st.randoms(use_true_random=False))
def test_token_order_invariance(docs, rnd):
    v = fit_vocabulary(docs)
    for d in docs:
        shuffled = list(d)
        rnd.shuffle(shuffled)
        assert transform(shuffled, v) == transform(d, v)


@given(_docs)
def test_vocabulary_tsv_roundtrip(docs):
    v = fit_vocabulary(docs)
    back = Vocabulary.from_tsv(v.to_tsv())
    assert back == v
    assert transform_many(docs, back).csr.nnz == transform_many(docs, v).csr.nnz


def test_tsv_requires_header():
    with pytest.raises(ValueError):
        Vocabulary.from_tsv("a\t0\t1\n")

"""TF-IDF vectorizer tests against an independent from-scratch oracle."""
import math

import numpy as np
import pytest

from cinesent.tfidf import (
    DEFAULT_MAX_FEATURES,
    DEFAULT_NGRAM_RANGE,
    SparseFeatureVector,
    doc_terms,
    fit_vocabulary,
    load_vocabulary,
    save_vocabulary,
    transform,
    transform_many,
)


def oracle_terms(tokens):
    terms = list(tokens)
    terms += [" ".join(tokens[i:i + 2]) for i in range(len(tokens) - 1)]
    return terms


def oracle_tfidf(docs):
    """From-scratch reimplementation: tf * (ln((1+N)/(1+df)) + 1), L2-normalized."""
    n = len(docs)
    df = {}
    for doc in docs:
        for term in set(oracle_terms(doc)):
            df[term] = df.get(term, 0) + 1
    vectors = []
    for doc in docs:
        counts = {}
        for term in oracle_terms(doc):
            counts[term] = counts.get(term, 0) + 1
        weights = {
            term: count * (math.log((1 + n) / (1 + df[term])) + 1.0)
            for term, count in counts.items()
        }
        norm = math.sqrt(sum(w * w for w in weights.values()))
        vectors.append({t: w / norm for t, w in weights.items()} if norm else {})
    return vectors


TOY_DOCS = [["cat", "sat"], ["cat", "cat", "hat"]]


def test_fit_assigns_lexicographic_indices():
    vocab = fit_vocabulary(TOY_DOCS, max_features=100)
    assert list(vocab.term_index) == sorted(vocab.term_index)
    assert vocab.term_index == {
        "cat": 0, "cat cat": 1, "cat hat": 2, "cat sat": 3, "hat": 4, "sat": 5,
    }
    assert vocab.document_frequency == {
        "cat": 2, "cat cat": 1, "cat hat": 1, "cat sat": 1, "hat": 1, "sat": 1,
    }
    assert vocab.corpus_size == 2


def test_frequency_cutoff_with_lexicographic_tie_break():
    vocab = fit_vocabulary([["a", "b"], ["b", "c"]], max_features=2)
    assert set(vocab.term_index) == {"a", "b"}
    assert vocab.term_index == {"a": 0, "b": 1}


def test_max_features_above_distinct_terms_keeps_all():
    vocab = fit_vocabulary([["x", "y"]], max_features=1000)
    assert set(vocab.term_index) == {"x", "y", "x y"}


def test_default_configuration_matches_reported_setup():
    assert DEFAULT_MAX_FEATURES == 50_000
    assert DEFAULT_NGRAM_RANGE == (1, 2)


def test_empty_training_set_rejected():
    with pytest.raises(ValueError):
        fit_vocabulary([])


def test_doc_terms_unigram_only_range():
    assert doc_terms(["a", "b"], (1, 1)) == ["a", "b"]
    assert doc_terms(["a", "b", "c"], (2, 2)) == ["a b", "b c"]


def test_transform_matches_frozen_hand_values():
    # Values computed with oracle_tfidf on TOY_DOCS and frozen.
    vocab = fit_vocabulary(TOY_DOCS)
    vec0 = transform(TOY_DOCS[0], vocab)
    dense0 = vec0.to_dense()
    assert abs(dense0[vocab.term_index["cat"]] - 0.4494364165239821) < 1e-12
    assert abs(dense0[vocab.term_index["sat"]] - 0.6316672017376245) < 1e-12
    assert abs(dense0[vocab.term_index["cat sat"]] - 0.6316672017376245) < 1e-12
    dense1 = transform(TOY_DOCS[1], vocab).to_dense()
    assert abs(dense1[vocab.term_index["cat"]] - 0.6348087971775132) < 1e-12
    assert abs(dense1[vocab.term_index["hat"]] - 0.4461008073765536) < 1e-12


def test_transform_agrees_with_oracle_on_wider_corpus():
    docs = [
        ["the", "enemy", "of", "one"],
        ["good", "night", "good", "night"],
        ["what", "are", "you", "doing"],
        ["good", "night"],
        ["enemy", "of", "all"],
    ]
    vocab = fit_vocabulary(docs)
    expected = oracle_tfidf(docs)
    for doc, want in zip(docs, expected):
        dense = transform(doc, vocab).to_dense()
        for term, weight in want.items():
            assert abs(dense[vocab.term_index[term]] - weight) < 1e-9
        assert abs(np.linalg.norm(dense) - 1.0) < 1e-12


def test_out_of_vocabulary_document_is_zero_vector():
    vocab = fit_vocabulary(TOY_DOCS)
    vec = transform(["dog", "ran"], vocab)
    assert len(vec.indices) == 0
    assert vec.norm == 0.0


def test_nonzero_outputs_have_unit_norm_and_positive_weights():
    vocab = fit_vocabulary(TOY_DOCS)
    vec = transform(["cat", "sat", "hat", "cat"], vocab)
    assert abs(vec.norm - 1.0) < 1e-12
    assert np.all(vec.values > 0)
    assert np.all(np.diff(vec.indices) > 0)


def test_fitting_is_deterministic():
    docs = [["b", "a"], ["c", "a", "b"], ["d"]]
    first = fit_vocabulary(docs)
    second = fit_vocabulary(list(docs))
    assert first.term_index == second.term_index
    assert first.document_frequency == second.document_frequency


def test_transform_many_rows_equal_individual_transforms():
    docs = [["cat"], ["hat", "cat"], ["dog"], []]
    vocab = fit_vocabulary(TOY_DOCS)
    matrix = transform_many(docs, vocab)
    assert matrix.shape == (4, vocab.size)
    for row, doc in enumerate(docs):
        np.testing.assert_array_equal(
            matrix.getrow(row).toarray()[0], transform(doc, vocab).to_dense()
        )


def test_vocabulary_persistence_round_trip(tmp_path):
    vocab = fit_vocabulary(TOY_DOCS, max_features=5)
    path = tmp_path / "vocab.tsv"
    save_vocabulary(vocab, path, meta={"config_hash": "abc"})
    loaded = load_vocabulary(path)
    assert loaded == vocab


def test_sparse_vector_invariants():
    with pytest.raises(ValueError):
        SparseFeatureVector(np.array([2, 1]), np.array([0.5, 0.5]), 3)
    with pytest.raises(ValueError):
        SparseFeatureVector(np.array([0]), np.array([np.inf]), 3)

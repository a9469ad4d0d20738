"""TF-IDF features over unigrams and bigrams with a frequency-capped vocabulary.

Weighting is raw term count times smoothed inverse document frequency,

    idf(t) = ln((1 + N) / (1 + df(t))) + 1

followed by L2 normalization of each document vector. The vocabulary keeps
the ``max_features`` terms with the highest total term frequency over the
fitting documents (ties broken lexicographically) and assigns indices in
lexicographic term order, so fitting is deterministic.
"""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np
from scipy import sparse

FORMAT_TAG = "cinesent-vocabulary v1"

DEFAULT_MAX_FEATURES = 50_000
DEFAULT_NGRAM_RANGE = (1, 2)


def doc_terms(tokens: Sequence[str], ngram_range: tuple[int, int]) -> list[str]:
    """Candidate terms of one document: token n-grams joined with spaces."""
    lo, hi = ngram_range
    terms = []
    for size in range(lo, hi + 1):
        if size == 1:
            terms.extend(tokens)
        else:
            terms.extend(
                " ".join(tokens[start:start + size])
                for start in range(len(tokens) - size + 1)
            )
    return terms


@dataclass(frozen=True)
class Vocabulary:
    term_index: dict
    document_frequency: dict
    corpus_size: int
    max_features: int
    ngram_range: tuple[int, int]

    @property
    def size(self) -> int:
        return len(self.term_index)

    def idf(self, term: str) -> float:
        df = self.document_frequency[term]
        return math.log((1 + self.corpus_size) / (1 + df)) + 1.0


@dataclass(eq=False)
class SparseFeatureVector:
    """Strictly increasing (index, weight) pairs in a V-dimensional space."""

    indices: np.ndarray
    values: np.ndarray
    dim: int

    def __post_init__(self):
        self.indices = np.asarray(self.indices, dtype=np.int64)
        self.values = np.asarray(self.values, dtype=np.float64)
        if np.any(np.diff(self.indices) <= 0):
            raise ValueError("indices must be strictly increasing")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("weights must be finite")

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.values))

    def to_dense(self) -> np.ndarray:
        dense = np.zeros(self.dim, dtype=np.float64)
        dense[self.indices] = self.values
        return dense


def _validate_ngram_range(ngram_range: tuple[int, int]) -> None:
    lo, hi = ngram_range
    if lo < 1 or hi < lo:
        raise ValueError(f"bad ngram_range {ngram_range}")


def fit_vocabulary(
    docs: Sequence[Sequence[str]],
    max_features: int = DEFAULT_MAX_FEATURES,
    ngram_range: tuple[int, int] = DEFAULT_NGRAM_RANGE,
) -> Vocabulary:
    """Fit term indices and document frequencies on the training documents only."""
    _validate_ngram_range(ngram_range)
    if max_features < 1:
        raise ValueError(f"max_features must be >= 1, got {max_features}")
    if len(docs) == 0:
        raise ValueError("cannot fit a vocabulary on an empty training set")

    term_frequency: Counter = Counter()
    document_frequency: Counter = Counter()
    for tokens in docs:
        terms = doc_terms(tokens, ngram_range)
        term_frequency.update(terms)
        document_frequency.update(set(terms))

    retained = sorted(term_frequency.items(), key=lambda item: (-item[1], item[0]))
    retained = sorted(term for term, _ in retained[:max_features])
    return Vocabulary(
        term_index={term: index for index, term in enumerate(retained)},
        document_frequency={term: document_frequency[term] for term in retained},
        corpus_size=len(docs),
        max_features=max_features,
        ngram_range=ngram_range,
    )


def transform(tokens: Sequence[str], vocab: Vocabulary) -> SparseFeatureVector:
    """TF-IDF vector of one document; L2-normalized unless all-zero.

    Out-of-vocabulary terms are ignored.
    """
    counts = Counter(
        term for term in doc_terms(tokens, vocab.ngram_range) if term in vocab.term_index
    )
    if not counts:
        return SparseFeatureVector(np.empty(0, np.int64), np.empty(0, np.float64), vocab.size)
    pairs = sorted(
        (vocab.term_index[term], count * vocab.idf(term)) for term, count in counts.items()
    )
    indices = np.fromiter((i for i, _ in pairs), dtype=np.int64, count=len(pairs))
    values = np.fromiter((w for _, w in pairs), dtype=np.float64, count=len(pairs))
    values /= np.linalg.norm(values)
    return SparseFeatureVector(indices, values, vocab.size)


def transform_many(docs: Iterable[Sequence[str]], vocab: Vocabulary) -> sparse.csr_matrix:
    """Stack per-document TF-IDF vectors into a CSR matrix."""
    data: list[float] = []
    indices: list[int] = []
    indptr = [0]
    for tokens in docs:
        vector = transform(tokens, vocab)
        data.extend(vector.values.tolist())
        indices.extend(vector.indices.tolist())
        indptr.append(len(indices))
    return sparse.csr_matrix(
        (np.asarray(data, np.float64), np.asarray(indices, np.int64), np.asarray(indptr, np.int64)),
        shape=(len(indptr) - 1, vocab.size),
    )


def save_vocabulary(vocab: Vocabulary, path: str | Path, meta: dict | None = None) -> None:
    path = Path(path)
    lines = [
        FORMAT_TAG,
        f"corpus_size={vocab.corpus_size}",
        f"max_features={vocab.max_features}",
        f"ngram_range={vocab.ngram_range[0]},{vocab.ngram_range[1]}",
    ]
    for key in sorted(meta or {}):
        lines.append(f"# {key}={meta[key]}")
    for term, index in sorted(vocab.term_index.items(), key=lambda item: item[1]):
        lines.append(f"{term}\t{index}\t{vocab.document_frequency[term]}")
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def load_vocabulary(path: str | Path) -> Vocabulary:
    path = Path(path)
    lines = path.read_text(encoding="utf-8").splitlines()
    if not lines or lines[0] != FORMAT_TAG:
        raise ValueError(f"{path}: not a {FORMAT_TAG} file")
    header = {}
    term_index = {}
    document_frequency = {}
    for line in lines[1:]:
        if not line or line.startswith("#"):
            continue
        if "\t" in line:
            term, index, df = line.split("\t")
            term_index[term] = int(index)
            document_frequency[term] = int(df)
        else:
            key, value = line.split("=", 1)
            header[key] = value
    lo, hi = header["ngram_range"].split(",")
    return Vocabulary(
        term_index=term_index,
        document_frequency=document_frequency,
        corpus_size=int(header["corpus_size"]),
        max_features=int(header["max_features"]),
        ngram_range=(int(lo), int(hi)),
    )

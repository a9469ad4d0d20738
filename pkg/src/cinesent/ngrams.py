"""Bigram/trigram frequency tables and era-level top-k rankings.

N-grams are windowed inside a single cue's token sequence and never cross
cue boundaries: cues are separate utterances.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import EmptySelectionError

Ngram = tuple[str, ...]

VALID_N = (2, 3)


@dataclass
class NgramTable:
    n: int
    counts: Counter = field(default_factory=Counter)

    @property
    def total(self) -> int:
        return sum(self.counts.values())


def extract_ngrams(tokens: Sequence[str], n: int) -> NgramTable:
    """Sliding-window n-gram counts over one token sequence (one cue).

    A sequence of length L contributes max(0, L - n + 1) n-grams.
    """
    if n not in VALID_N:
        raise ValueError(f"n must be one of {VALID_N}, got {n}")
    table = NgramTable(n=n)
    for start in range(len(tokens) - n + 1):
        table.counts[tuple(tokens[start:start + n])] += 1
    return table


def merge_tables(tables: Iterable[NgramTable], n: int) -> NgramTable:
    """Sum counts across tables; associative and commutative."""
    merged = NgramTable(n=n)
    for table in tables:
        if table.n != n:
            raise ValueError(f"cannot merge n={table.n} table into n={n} table")
        merged.counts.update(table.counts)
    return merged


def cues_table(cue_tokens: Iterable[Sequence[str]], n: int) -> NgramTable:
    """N-gram table for one film: per-cue windows, merged."""
    return merge_tables((extract_ngrams(tokens, n) for tokens in cue_tokens), n)


def top_k(table: NgramTable, k: int) -> list[tuple[str, int]]:
    """Top-k n-grams as (space-joined tokens, count), descending by count.

    Ties break by lexicographic order of the joined tokens, so the ranking
    is deterministic.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    joined = ((" ".join(ngram), count) for ngram, count in table.counts.items())
    ranked = sorted(joined, key=lambda item: (-item[1], item[0]))
    return ranked[:k]


def era_table(
    films: Iterable[tuple[int, Sequence[Sequence[str]]]],
    era: tuple[int, int],
    n: int,
    k: int,
) -> list[tuple[str, int]]:
    """Top-k table over all films whose year falls inside the era (inclusive).

    ``films`` yields (year, cue token sequences) pairs. Raises
    :class:`EmptySelectionError` when no film falls in the era.
    """
    first, last = era
    if first > last:
        raise EmptySelectionError(f"empty era range {era}")
    selected = [cues for year, cues in films if first <= year <= last]
    if not selected:
        raise EmptySelectionError(f"no films in era {first}-{last}")
    merged = merge_tables((cues_table(cues, n) for cues in selected), n)
    return top_k(merged, k)

"""Corpus-level longitudinal aggregations: co-occurrence, emotion counts,
abuse trends by year/decade/genre/award class.

All aggregations are associative merges over per-film records, so any
partition of the corpus can be aggregated independently and combined.
Decades bucket as floor(year / 10) * 10.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .scoring import N_LABELS, decade_of

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class TrendRow:
    key: tuple
    values: tuple[float, ...]
    n: int


@dataclass(frozen=True)
class TrendSeries:
    key_fields: tuple[str, ...]
    value_fields: tuple[str, ...]
    rows: tuple[TrendRow, ...]

    def __post_init__(self):
        object.__setattr__(self, "rows", tuple(self.rows))
        keys = [row.key for row in self.rows]
        if len(set(keys)) != len(keys):
            raise ValueError("trend series keys must be unique")
        if any(row.n <= 0 for row in self.rows):
            raise ValueError("trend series group sizes must be positive")

    def as_dict(self) -> dict:
        return {row.key: row for row in self.rows}


def _series(key_fields, value_fields, rows) -> TrendSeries:
    rows = sorted(rows, key=lambda row: row.key)
    return TrendSeries(tuple(key_fields), tuple(value_fields), tuple(rows))


def cooccurrence(label_sets: Iterable[Sequence[int]]) -> np.ndarray:
    """Symmetric label co-occurrence counts; entry (a, b) is the number of
    items with both labels positive, so the diagonal counts single labels."""
    matrix = np.asarray(list(label_sets), dtype=np.int64)
    if matrix.size == 0:
        return np.zeros((N_LABELS, N_LABELS), dtype=np.int64)
    if matrix.ndim != 2 or matrix.shape[1] != N_LABELS:
        raise ValueError(f"expected (items, {N_LABELS}) binary matrix, got {matrix.shape}")
    if not np.all((matrix == 0) | (matrix == 1)):
        raise ValueError("label sets must be binary")
    return matrix.T @ matrix


def emotion_counts(
    label_sets: Iterable[Sequence[int]],
    groups: Sequence[str] | None = None,
    allowed_groups: Sequence[str] | None = None,
) -> dict[str, np.ndarray]:
    """Positive-label counts per group (one 10-vector per group key).

    With ``groups`` omitted everything lands under the key ``corpus``.
    """
    matrix = np.asarray(list(label_sets), dtype=np.int64)
    if matrix.size == 0:
        matrix = matrix.reshape(0, N_LABELS)
    if matrix.shape[1] != N_LABELS:
        raise ValueError(f"expected {N_LABELS}-label vectors")
    if groups is None:
        groups = ["corpus"] * matrix.shape[0]
    if len(groups) != matrix.shape[0]:
        raise ValueError("groups must parallel label_sets")
    if allowed_groups is not None:
        unknown = sorted(set(groups) - set(allowed_groups))
        if unknown:
            raise ValueError(f"unknown group keys: {unknown}")
    counts: dict[str, np.ndarray] = {}
    for group, row in zip(groups, matrix):
        if group not in counts:
            counts[group] = np.zeros(N_LABELS, dtype=np.int64)
        counts[group] += row
    return counts


def abuse_trend(records: Iterable[tuple[int, str, int]]) -> TrendSeries:
    """Total abusive count per (year, award_class).

    ``records`` yields (year, award_class, abusive_count) per film.
    """
    sums: dict[tuple, int] = {}
    sizes: dict[tuple, int] = {}
    for year, award, count in records:
        key = (year, award)
        sums[key] = sums.get(key, 0) + count
        sizes[key] = sizes.get(key, 0) + 1
    rows = [TrendRow(key, (float(sums[key]),), sizes[key]) for key in sums]
    return _series(("year", "award_class"), ("abusive_count",), rows)


def trailing_average(
    year_values: Sequence[tuple[int, float]], window_years: int
) -> list[tuple[int, float]]:
    """Trailing moving average over the calendar window [y - w + 1, y],
    averaging only years that have data."""
    if window_years < 1:
        raise ValueError("window_years must be >= 1")
    by_year = dict(year_values)
    if len(by_year) != len(year_values):
        raise ValueError("duplicate years in series")
    smoothed = []
    for year in sorted(by_year):
        in_window = [by_year[y] for y in range(year - window_years + 1, year + 1) if y in by_year]
        smoothed.append((year, sum(in_window) / len(in_window)))
    return smoothed


def abuse_probability_by_year(
    records: Iterable[tuple[int, str, float]], window_years: int = 10
) -> TrendSeries:
    """Yearly mean per-film abuse probability per award class, with a
    trailing ``window_years`` moving average.

    ``records`` yields (year, award_class, film_mean_probability).
    """
    grouped: dict[str, dict[int, list[float]]] = {}
    for year, award, prob in records:
        grouped.setdefault(award, {}).setdefault(year, []).append(prob)
    rows = []
    for award, years in grouped.items():
        yearly = [(year, sum(vals) / len(vals)) for year, vals in sorted(years.items())]
        smoothed = dict(trailing_average(yearly, window_years))
        for year, mean in yearly:
            rows.append(
                TrendRow((year, award), (mean, smoothed[year]), len(years[year]))
            )
    return _series(
        ("year", "award_class"), ("mean_probability", "smoothed_probability"), rows
    )


def normalized_abuse_by_genre(
    records: Iterable[tuple[str, int, int, int]]
) -> TrendSeries:
    """Mean per-film normalized abusive count per (decade, genre).

    ``records`` yields (genre, year, abusive_count, total_tokens) per film;
    films with zero tokens are excluded with a warning.
    """
    grouped: dict[tuple, list[float]] = {}
    for genre, year, abusive, total in records:
        if total == 0:
            logger.warning("excluding zero-token film (%s, %d) from normalized abuse", genre, year)
            continue
        grouped.setdefault((decade_of(year), genre), []).append(abusive / total)
    rows = [
        TrendRow(key, (sum(vals) / len(vals),), len(vals)) for key, vals in grouped.items()
    ]
    return _series(("decade", "genre"), ("normalized_abuse",), rows)


def time_per_decade(records: Iterable[tuple[int, int, int]]) -> TrendSeries:
    """Mean dialogue time and mean abusive time (ms) per decade.

    ``records`` yields (year, abusive_ms, dialogue_ms) per film.
    """
    grouped: dict[tuple, list[tuple[int, int]]] = {}
    for year, abusive_ms, dialogue_ms in records:
        grouped.setdefault((decade_of(year),), []).append((abusive_ms, dialogue_ms))
    rows = []
    for key, pairs in grouped.items():
        n = len(pairs)
        mean_dialogue = sum(d for _, d in pairs) / n
        mean_abusive = sum(a for a, _ in pairs) / n
        rows.append(TrendRow(key, (mean_dialogue, mean_abusive), n))
    return _series(("decade",), ("mean_dialogue_ms", "mean_abusive_ms"), rows)


def words_per_decade(records: Iterable[tuple[int, int, int]]) -> TrendSeries:
    """Total and abusive word sums per decade.

    ``records`` yields (year, abusive_count, total_tokens) per film.
    """
    totals: dict[tuple, list[int]] = {}
    for year, abusive, total in records:
        bucket = totals.setdefault((decade_of(year),), [0, 0, 0])
        bucket[0] += total
        bucket[1] += abusive
        bucket[2] += 1
    rows = [
        TrendRow(key, (float(total), float(abusive)), count)
        for key, (total, abusive, count) in totals.items()
    ]
    return _series(("decade",), ("total_words", "abusive_words"), rows)

"""Weighted sentiment polarity over the ten canonical emotion labels.

The label order below defines vector indexing everywhere in the system.
Weights are signed reals in [-4, 3]; the polarity score of a label-value
vector is the plain dot product, and its sign gives Positive / Negative /
Neutral.

The bundled default weight profile is a documented hand assignment (the
positive emotions carry positive weights, official reports are neutral);
production analyses should load a calibrated profile file.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Iterable, Mapping, Sequence

SENTIMENT_LABELS = (
    "optimistic",
    "thankful",
    "empathetic",
    "pessimistic",
    "anxious",
    "sad",
    "annoyed",
    "denial",
    "official_report",
    "joking",
)

N_LABELS = len(SENTIMENT_LABELS)

WEIGHT_MIN = -4.0
WEIGHT_MAX = 3.0

# Names seen in source datasets and figures, normalized to canonical labels.
LABEL_ALIASES = {
    "optimism": "optimistic",
    "gratitude": "thankful",
    "compassion": "empathetic",
    "empathetic(compassion)": "empathetic",
    "pessimism": "pessimistic",
    "anxiety": "anxious",
    "sadness": "sad",
    "anger": "annoyed",
    "angry": "annoyed",
    "official report": "official_report",
    "official reports": "official_report",
    "jokes": "joking",
    "joking(humour)": "joking",
    "humour": "joking",
    "humor": "joking",
}


def canonical_label(name: str) -> str:
    """Resolve a dataset or figure label name to the canonical label."""
    key = name.strip().lower().replace("_", " ")
    key = " ".join(key.split())
    canon = key.replace(" ", "_")
    if canon in SENTIMENT_LABELS:
        return canon
    if key in LABEL_ALIASES:
        return LABEL_ALIASES[key]
    raise ValueError(f"unknown sentiment label {name!r}")


class Polarity(str, enum.Enum):
    POSITIVE = "Positive"
    NEGATIVE = "Negative"
    NEUTRAL = "Neutral"


@dataclass(frozen=True)
class PolarityResult:
    score: float
    sign: Polarity


def _sign(score: float) -> Polarity:
    if score > 0:
        return Polarity.POSITIVE
    if score < 0:
        return Polarity.NEGATIVE
    return Polarity.NEUTRAL


@dataclass(frozen=True)
class SentimentWeights:
    """One signed weight per canonical label, each within [-4, 3]."""

    name: str
    values: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(float(v) for v in self.values))
        if len(self.values) != N_LABELS:
            raise ValueError(f"expected {N_LABELS} weights, got {len(self.values)}")
        for label, value in zip(SENTIMENT_LABELS, self.values):
            if not WEIGHT_MIN <= value <= WEIGHT_MAX:
                raise ValueError(
                    f"weight for {label} is {value}, outside [{WEIGHT_MIN}, {WEIGHT_MAX}]"
                )

    def as_mapping(self) -> dict[str, float]:
        return dict(zip(SENTIMENT_LABELS, self.values))


def weights_from_mapping(mapping: Mapping[str, float], name: str) -> SentimentWeights:
    resolved = {canonical_label(label): float(value) for label, value in mapping.items()}
    missing = [label for label in SENTIMENT_LABELS if label not in resolved]
    if missing:
        raise ValueError(f"weights profile {name!r} is missing labels: {missing}")
    return SentimentWeights(name=name, values=tuple(resolved[l] for l in SENTIMENT_LABELS))


def load_weights(path: str | Path, name: str | None = None) -> SentimentWeights:
    """Read a profile of 10 ``label=value`` lines (``#`` comments allowed)."""
    path = Path(path)
    return _parse_weights(path.read_text(encoding="utf-8"), name or path.stem)


def builtin_weights() -> SentimentWeights:
    text = resources.files("cinesent.data").joinpath("weights_default.txt").read_text("utf-8")
    return _parse_weights(text, "builtin")


def _parse_weights(text: str, name: str) -> SentimentWeights:
    mapping: dict[str, float] = {}
    for raw_line in text.splitlines():
        line = raw_line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"weights profile {name!r}: bad line {raw_line!r}")
        label, value = line.split("=", 1)
        key = canonical_label(label)
        if key in mapping:
            raise ValueError(f"weights profile {name!r}: duplicate label {label!r}")
        mapping[key] = float(value)
    return weights_from_mapping(mapping, name)


def weighted_score(label_values: Sequence[float], weights: SentimentWeights) -> PolarityResult:
    """Dot product of per-label values in [0, 1] with the signed weights."""
    if len(label_values) != N_LABELS:
        raise ValueError(f"expected {N_LABELS} label values, got {len(label_values)}")
    for value in label_values:
        if not 0.0 <= value <= 1.0:
            raise ValueError(f"label value {value} outside [0, 1]")
    score = float(sum(w * v for w, v in zip(weights.values, label_values)))
    return PolarityResult(score=score, sign=_sign(score))


def film_score(cue_label_values: Sequence[Sequence[float]], weights: SentimentWeights) -> float:
    """Mean per-cue weighted score for one film."""
    from .errors import NoScoredContentError

    if len(cue_label_values) == 0:
        raise NoScoredContentError("film has no scored cues")
    scores = [weighted_score(values, weights).score for values in cue_label_values]
    return sum(scores) / len(scores)


@dataclass(frozen=True)
class GroupStats:
    mean: float
    std: float
    n: int


def group_stats(items: Iterable[tuple[object, float]]) -> dict[object, GroupStats]:
    """Sample mean and population (divisor N) standard deviation per group key."""
    grouped: dict[object, list[float]] = {}
    for key, value in items:
        grouped.setdefault(key, []).append(value)
    stats = {}
    for key, values in grouped.items():
        n = len(values)
        mean = sum(values) / n
        variance = sum((v - mean) ** 2 for v in values) / n
        stats[key] = GroupStats(mean=mean, std=math.sqrt(variance), n=n)
    return stats


def decade_of(year: int) -> int:
    return (year // 10) * 10


def decade_average(
    film_scores: Iterable[tuple[int, str, float]]
) -> dict[tuple[int, str], GroupStats]:
    """Mean and std of film scores grouped by (decade, award class).

    ``film_scores`` yields (year, award_class, score) triples.
    """
    return group_stats(
        ((decade_of(year), award), score) for year, award, score in film_scores
    )

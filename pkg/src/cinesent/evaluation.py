"""Dataset splitting and the classification metric suite.

Splits follow the 0.70/0.10/0.20 train/validation/test protocol with a fixed
default seed of 42. Multi-label data is split by greedy iterative
stratification (scarcest label first); binary data by per-class proportional
allocation with largest-remainder rounding.

Counts are accumulated as integers and divided once, so metric values are
bitwise-reproducible against a cell-counting oracle. Precision, recall and
F1 are defined as 0 when their denominator is 0.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Sequence

import numpy as np

logger = logging.getLogger(__name__)

DEFAULT_FRACTIONS = (0.70, 0.10, 0.20)
DEFAULT_SEED = 42

_TIE_EPS = 1e-9


@dataclass(frozen=True)
class SplitAssignment:
    train: np.ndarray
    validation: np.ndarray
    test: np.ndarray

    def __post_init__(self):
        for name in ("train", "validation", "test"):
            object.__setattr__(self, name, np.asarray(getattr(self, name), dtype=np.int64))
        combined = np.concatenate([self.train, self.validation, self.test])
        if len(np.unique(combined)) != len(combined):
            raise ValueError("split parts must be disjoint")

    @property
    def n(self) -> int:
        return len(self.train) + len(self.validation) + len(self.test)

    def parts(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        return self.train, self.validation, self.test


def _check_fractions(fractions: Sequence[float]) -> tuple[float, float, float]:
    if len(fractions) != 3:
        raise ValueError("expected (train, validation, test) fractions")
    if any(not 0.0 < f < 1.0 for f in fractions):
        raise ValueError(f"fractions must lie in (0, 1), got {tuple(fractions)}")
    if abs(sum(fractions) - 1.0) > 1e-9:
        raise ValueError(f"fractions must sum to 1, got {sum(fractions)}")
    return tuple(fractions)


def _binary_matrix(Y, name: str) -> np.ndarray:
    Y = np.asarray(Y)
    if not np.all((Y == 0) | (Y == 1)):
        raise ValueError(f"{name} must be binary (0/1)")
    return Y.astype(np.int64)


def _pick_split(scores: np.ndarray, capacity: np.ndarray, rng: np.random.Generator) -> int:
    """Split with greatest score; ties by capacity, then seeded random draw."""
    best = np.flatnonzero(scores >= scores.max() - _TIE_EPS)
    if len(best) > 1:
        cap = capacity[best]
        best = best[np.flatnonzero(cap >= cap.max() - _TIE_EPS)]
    if len(best) > 1:
        return int(rng.choice(best))
    return int(best[0])


def iterative_stratified_split(
    Y,
    fractions: Sequence[float] = DEFAULT_FRACTIONS,
    seed: int = DEFAULT_SEED,
) -> SplitAssignment:
    """Greedy iterative stratification of a multi-label matrix.

    Repeatedly picks the label with the fewest remaining positive examples
    and deals those examples to the split with the greatest remaining demand
    for that label; ties break by overall remaining capacity, then by a
    seeded random draw. Examples without remaining positive labels are
    dealt by overall capacity at the end.
    """
    fractions = _check_fractions(fractions)
    Y = _binary_matrix(Y, "Y")
    if Y.ndim != 2 or Y.shape[0] == 0:
        raise ValueError("Y must be a non-empty (examples, labels) matrix")
    n, n_labels = Y.shape
    rng = np.random.default_rng(seed)

    desired_total = np.array([f * n for f in fractions], dtype=np.float64)
    desired_label = np.array(
        [[f * c for c in Y.sum(axis=0)] for f in fractions], dtype=np.float64
    )
    unassigned = np.ones(n, dtype=bool)
    assignment = np.full(n, -1, dtype=np.int64)

    while unassigned.any():
        remaining_positives = Y[unassigned].sum(axis=0)
        live = np.flatnonzero(remaining_positives > 0)
        if len(live) == 0:
            for i in np.flatnonzero(unassigned):
                j = _pick_split(desired_total, desired_total, rng)
                assignment[i] = j
                unassigned[i] = False
                desired_total[j] -= 1.0
            break
        label = int(live[np.argmin(remaining_positives[live])])
        for i in np.flatnonzero(unassigned & (Y[:, label] == 1)):
            j = _pick_split(desired_label[:, label], desired_total, rng)
            assignment[i] = j
            unassigned[i] = False
            desired_label[j, Y[i] == 1] -= 1.0
            desired_total[j] -= 1.0

    return SplitAssignment(
        train=np.flatnonzero(assignment == 0),
        validation=np.flatnonzero(assignment == 1),
        test=np.flatnonzero(assignment == 2),
    )


def _largest_remainder(total: int, fractions: tuple[float, float, float]) -> list[int]:
    exact = [f * total for f in fractions]
    counts = [int(np.floor(e)) for e in exact]
    shortfall = total - sum(counts)
    remainders = sorted(
        range(len(fractions)), key=lambda j: (-(exact[j] - counts[j]), j)
    )
    for j in remainders[:shortfall]:
        counts[j] += 1
    return counts


def stratified_binary_split(
    y,
    fractions: Sequence[float] = DEFAULT_FRACTIONS,
    seed: int = DEFAULT_SEED,
) -> SplitAssignment:
    """Per-class proportional allocation with largest-remainder rounding."""
    fractions = _check_fractions(fractions)
    y = _binary_matrix(y, "y")
    if y.ndim != 1 or len(y) == 0:
        raise ValueError("y must be a non-empty label vector")
    rng = np.random.default_rng(seed)

    parts: list[list[int]] = [[], [], []]
    for value in sorted(np.unique(y)):
        indices = np.flatnonzero(y == value)
        if len(indices) < 3:
            logger.warning("class %s has %d examples, fewer than splits", value, len(indices))
        rng.shuffle(indices)
        counts = _largest_remainder(len(indices), fractions)
        cursor = 0
        for j, count in enumerate(counts):
            parts[j].extend(indices[cursor:cursor + count].tolist())
            cursor += count

    return SplitAssignment(
        train=np.sort(parts[0]), validation=np.sort(parts[1]), test=np.sort(parts[2])
    )


@dataclass(frozen=True)
class MetricReport:
    """Multi-label metrics, binary metrics, or both (unused fields are None)."""

    subset_accuracy: float | None = None
    micro_precision: float | None = None
    micro_recall: float | None = None
    micro_f1: float | None = None
    hamming_loss: float | None = None
    accuracy: float | None = None
    precision: float | None = None
    recall: float | None = None
    f1: float | None = None

    def to_dict(self) -> dict:
        return {
            name: value
            for name, value in self.__dict__.items()
            if value is not None
        }

    def multilabel_row(self) -> list[float]:
        """Values in report-table order: Acc. / Prec. / Rec. / Micro F1 / Ham. Loss."""
        return [self.subset_accuracy, self.micro_precision, self.micro_recall,
                self.micro_f1, self.hamming_loss]

    def binary_row(self) -> list[float]:
        """Values in report-table order: Accuracy / Precision / Recall / F1-score."""
        return [self.accuracy, self.precision, self.recall, self.f1]


def _ratio(numerator: int, denominator: int) -> float:
    return numerator / denominator if denominator else 0.0


def _f1(precision: float, recall: float) -> float:
    total = precision + recall
    return 2.0 * precision * recall / total if total else 0.0


def compute_multilabel_metrics(Y_true, Y_pred) -> MetricReport:
    """Subset accuracy, micro precision/recall/F1 pooled over all cells,
    and Hamming loss (fraction of mismatched cells)."""
    Y_true = _binary_matrix(Y_true, "Y_true")
    Y_pred = _binary_matrix(Y_pred, "Y_pred")
    if Y_true.shape != Y_pred.shape:
        raise ValueError(f"shape mismatch: {Y_true.shape} vs {Y_pred.shape}")
    if Y_true.ndim != 2:
        raise ValueError("expected (examples, labels) matrices")
    rows, labels = Y_true.shape

    exact = int(np.sum(np.all(Y_true == Y_pred, axis=1)))
    tp = int(np.sum((Y_true == 1) & (Y_pred == 1)))
    fp = int(np.sum((Y_true == 0) & (Y_pred == 1)))
    fn = int(np.sum((Y_true == 1) & (Y_pred == 0)))
    mismatched = int(np.sum(Y_true != Y_pred))

    precision = _ratio(tp, tp + fp)
    recall = _ratio(tp, tp + fn)
    return MetricReport(
        subset_accuracy=_ratio(exact, rows),
        micro_precision=precision,
        micro_recall=recall,
        micro_f1=_f1(precision, recall),
        hamming_loss=_ratio(mismatched, rows * labels),
    )


def compute_binary_metrics(y_true, y_pred) -> MetricReport:
    """Accuracy, precision, recall and F1 from the confusion matrix."""
    y_true = _binary_matrix(y_true, "y_true")
    y_pred = _binary_matrix(y_pred, "y_pred")
    if y_true.shape != y_pred.shape:
        raise ValueError(f"shape mismatch: {y_true.shape} vs {y_pred.shape}")
    if y_true.ndim != 1:
        raise ValueError("expected label vectors")

    tp = int(np.sum((y_true == 1) & (y_pred == 1)))
    tn = int(np.sum((y_true == 0) & (y_pred == 0)))
    fp = int(np.sum((y_true == 0) & (y_pred == 1)))
    fn = int(np.sum((y_true == 1) & (y_pred == 0)))

    precision = _ratio(tp, tp + fp)
    recall = _ratio(tp, tp + fn)
    return MetricReport(
        accuracy=_ratio(tp + tn, len(y_true)),
        precision=precision,
        recall=recall,
        f1=_f1(precision, recall),
    )

"""Gradient-trained linear classifiers over sparse TF-IDF features.

Supports logistic regression (binary cross-entropy on sigmoid scores) and
linear SVM (hinge loss on +/-1 targets), binary or one-vs-rest multi-label:
one weight column per label, trained jointly but mathematically independent.

The optimizer is deterministic mini-batch gradient descent. The per-label
objective is

    mean_i loss(x_i, y_i) + (l2 / 2) * ||w||^2

with the bias excluded from regularization. Identical data, loss and config
produce bitwise-identical parameters.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Union

import numpy as np
from scipy import sparse

from .errors import TrainingDivergedError, UnsupportedForLossError
from .tfidf import SparseFeatureVector

LOSS_LOGISTIC = "logistic"
LOSS_HINGE = "hinge"
LOSSES = (LOSS_LOGISTIC, LOSS_HINGE)

MODEL_FORMAT_TAG = "cinesent-linear-model v1"

_PROB_FLOOR = np.nextafter(0.0, 1.0)
_PROB_CEIL = np.nextafter(1.0, 0.0)

Matrix = Union[np.ndarray, sparse.spmatrix]


@dataclass
class TrainConfig:
    # lr 1.0 suits unit-norm TF-IDF rows with mean-gradient batches; smaller
    # rates leave positive scores under the 0.5 decision threshold
    learning_rate: float = 1.0
    epochs: int = 30
    l2: float = 1e-4
    seed: int = 42
    shuffle: bool = True
    batch_size: int = 64

    def __post_init__(self):
        if self.learning_rate <= 0:
            raise ValueError("learning_rate must be > 0")
        if self.epochs < 1:
            raise ValueError("epochs must be >= 1")
        if self.l2 < 0:
            raise ValueError("l2 must be >= 0")
        if self.batch_size < 1:
            raise ValueError("batch_size must be >= 1")


@dataclass(eq=False)
class LinearModel:
    loss: str
    weights: np.ndarray  # (labels, features)
    bias: np.ndarray  # (labels,)
    l2: float
    loss_history: list[float] = field(default_factory=list, repr=False)

    def __post_init__(self):
        self.weights = np.asarray(self.weights, dtype=np.float64)
        self.bias = np.asarray(self.bias, dtype=np.float64)
        if self.loss not in LOSSES:
            raise ValueError(f"loss must be one of {LOSSES}, got {self.loss!r}")
        if self.weights.ndim != 2 or self.bias.shape != (self.weights.shape[0],):
            raise ValueError("weights must be (labels, features) with matching bias")
        if not (np.all(np.isfinite(self.weights)) and np.all(np.isfinite(self.bias))):
            raise ValueError("model parameters must be finite")

    @property
    def n_labels(self) -> int:
        return self.weights.shape[0]

    @property
    def n_features(self) -> int:
        return self.weights.shape[1]


def _as_2d_labels(Y) -> np.ndarray:
    Y = np.asarray(Y, dtype=np.float64)
    if Y.ndim == 1:
        Y = Y[:, None]
    if Y.ndim != 2:
        raise ValueError(f"label matrix must be 1- or 2-dimensional, got shape {Y.shape}")
    if not np.all((Y == 0) | (Y == 1)):
        raise ValueError("labels must be binary (0/1)")
    return Y


def _scores(weights: np.ndarray, bias: np.ndarray, X: Matrix) -> np.ndarray:
    return np.asarray(X @ weights.T) + bias


def objective(weights: np.ndarray, bias: np.ndarray, X: Matrix, Y: np.ndarray,
              loss: str, l2: float) -> float:
    """Sum over labels of (mean data loss + (l2/2)||w_label||^2)."""
    scores = _scores(weights, bias, X)
    if loss == LOSS_LOGISTIC:
        # log(1 + e^s) - y*s is BCE on sigmoid scores, stable for large |s|
        data = np.logaddexp(0.0, scores) - scores * Y
    elif loss == LOSS_HINGE:
        signed = 2.0 * Y - 1.0
        data = np.maximum(0.0, 1.0 - signed * scores)
    else:
        raise ValueError(f"unknown loss {loss!r}")
    reg = 0.5 * l2 * float(np.sum(weights * weights))
    return float(np.sum(data.mean(axis=0)) + reg)


def gradients(weights: np.ndarray, bias: np.ndarray, X: Matrix, Y: np.ndarray,
              loss: str, l2: float) -> tuple[np.ndarray, np.ndarray]:
    """Analytic gradient of :func:`objective` with respect to weights and bias."""
    n = Y.shape[0]
    scores = _scores(weights, bias, X)
    if loss == LOSS_LOGISTIC:
        residual = _sigmoid(scores) - Y
    elif loss == LOSS_HINGE:
        signed = 2.0 * Y - 1.0
        violated = (signed * scores) < 1.0
        residual = np.where(violated, -signed, 0.0)
    else:
        raise ValueError(f"unknown loss {loss!r}")
    grad_w = np.asarray(X.T @ residual).T / n + l2 * weights
    grad_b = residual.mean(axis=0)
    return grad_w, grad_b


def _sigmoid(scores: np.ndarray) -> np.ndarray:
    with np.errstate(over="ignore"):
        probs = 1.0 / (1.0 + np.exp(-scores))
    # keep probabilities strictly inside (0, 1) for any finite score
    return np.clip(probs, _PROB_FLOOR, _PROB_CEIL)


def train(X: Matrix, Y, loss: str, config: TrainConfig) -> LinearModel:
    """Deterministic mini-batch gradient descent, seeded by ``config.seed``.

    ``X`` is (n, features), dense or CSR; ``Y`` is (n,) or (n, labels) binary.
    Raises :class:`TrainingDivergedError` if an epoch's loss goes non-finite.
    """
    if loss not in LOSSES:
        raise ValueError(f"loss must be one of {LOSSES}, got {loss!r}")
    Y = _as_2d_labels(Y)
    n, n_labels = Y.shape
    if X.shape[0] != n:
        raise ValueError(f"X has {X.shape[0]} rows but Y has {n}")
    n_features = X.shape[1]
    if sparse.issparse(X):
        X = X.tocsr()

    weights = np.zeros((n_labels, n_features), dtype=np.float64)
    bias = np.zeros(n_labels, dtype=np.float64)
    rng = np.random.default_rng(config.seed)
    history: list[float] = []

    for epoch in range(config.epochs):
        order = rng.permutation(n) if config.shuffle else np.arange(n)
        loss_sum = 0.0
        for start in range(0, n, config.batch_size):
            batch = order[start:start + config.batch_size]
            Xb, Yb = X[batch], Y[batch]
            loss_sum += objective(weights, bias, Xb, Yb, loss, config.l2) * len(batch)
            grad_w, grad_b = gradients(weights, bias, Xb, Yb, loss, config.l2)
            weights -= config.learning_rate * grad_w
            bias -= config.learning_rate * grad_b
        epoch_loss = loss_sum / n
        if not np.isfinite(epoch_loss):
            raise TrainingDivergedError(epoch)
        history.append(epoch_loss)

    return LinearModel(loss=loss, weights=weights, bias=bias, l2=config.l2,
                       loss_history=history)


def _as_feature_row(x, n_features: int):
    if isinstance(x, SparseFeatureVector):
        if x.dim != n_features:
            raise ValueError(f"vector dim {x.dim} != model features {n_features}")
        return x
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (n_features,):
        raise ValueError(f"vector shape {x.shape} != ({n_features},)")
    return x


def decision_scores(model: LinearModel, x) -> np.ndarray:
    """Raw scores W x + b for one feature vector."""
    x = _as_feature_row(x, model.n_features)
    if isinstance(x, SparseFeatureVector):
        if len(x.indices) == 0:
            return model.bias.copy()
        return model.weights[:, x.indices] @ x.values + model.bias
    return model.weights @ x + model.bias


def decision_scores_many(model: LinearModel, X: Matrix) -> np.ndarray:
    if X.shape[1] != model.n_features:
        raise ValueError(f"matrix has {X.shape[1]} columns, model expects {model.n_features}")
    return _scores(model.weights, model.bias, X)


def predict_proba(model: LinearModel, x) -> np.ndarray:
    """Per-label sigmoid probabilities; logistic models only."""
    if model.loss != LOSS_LOGISTIC:
        raise UnsupportedForLossError(f"probabilities undefined for {model.loss} loss")
    return _sigmoid(decision_scores(model, x))


def predict_proba_many(model: LinearModel, X: Matrix) -> np.ndarray:
    if model.loss != LOSS_LOGISTIC:
        raise UnsupportedForLossError(f"probabilities undefined for {model.loss} loss")
    return _sigmoid(decision_scores_many(model, X))


def predict_labels(model: LinearModel, x, threshold: float = 0.5) -> np.ndarray:
    """Binary label vector: probability >= threshold (logistic) or score >= 0 (hinge)."""
    if model.loss == LOSS_LOGISTIC:
        if not 0.0 < threshold < 1.0:
            raise ValueError(f"threshold must be in (0, 1), got {threshold}")
        return (predict_proba(model, x) >= threshold).astype(np.int64)
    return (decision_scores(model, x) >= 0.0).astype(np.int64)


def predict_labels_many(model: LinearModel, X: Matrix, threshold: float = 0.5) -> np.ndarray:
    if model.loss == LOSS_LOGISTIC:
        if not 0.0 < threshold < 1.0:
            raise ValueError(f"threshold must be in (0, 1), got {threshold}")
        return (predict_proba_many(model, X) >= threshold).astype(np.int64)
    return (decision_scores_many(model, X) >= 0.0).astype(np.int64)


def save_model(model: LinearModel, path: str | Path, meta: dict | None = None) -> None:
    """Write the versioned text format: header, then per-label bias and
    sparse non-zero weights."""
    path = Path(path)
    lines = [
        MODEL_FORMAT_TAG,
        f"loss={model.loss}",
        f"labels={model.n_labels}",
        f"features={model.n_features}",
        f"l2={model.l2!r}",
    ]
    for key in sorted(meta or {}):
        lines.append(f"# {key}={meta[key]}")
    for label in range(model.n_labels):
        lines.append(f"label {label}")
        lines.append(f"bias {float(model.bias[label])!r}")
        row = model.weights[label]
        nonzero = np.nonzero(row)[0]
        lines.append(" ".join(f"{i}:{float(row[i])!r}" for i in nonzero))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def load_model(path: str | Path) -> LinearModel:
    path = Path(path)
    lines = path.read_text(encoding="utf-8").splitlines()
    if not lines or lines[0] != MODEL_FORMAT_TAG:
        raise ValueError(f"{path}: not a {MODEL_FORMAT_TAG} file")
    header = {}
    body_start = 1
    for line in lines[1:]:
        body_start += 1
        if line.startswith("#"):
            continue
        if line.startswith("label "):
            body_start -= 1
            break
        key, value = line.split("=", 1)
        header[key] = value

    n_labels = int(header["labels"])
    n_features = int(header["features"])
    weights = np.zeros((n_labels, n_features), dtype=np.float64)
    bias = np.zeros(n_labels, dtype=np.float64)
    cursor = body_start
    for _ in range(n_labels):
        label = int(lines[cursor].split()[1])
        bias[label] = float(lines[cursor + 1].split()[1])
        weight_line = lines[cursor + 2]
        if weight_line:
            for pair in weight_line.split():
                index, value = pair.split(":")
                weights[label, int(index)] = float(value)
        cursor += 3
    return LinearModel(loss=header["loss"], weights=weights, bias=bias,
                       l2=float(header["l2"]))

"""Client for the model-inference service, with native linear fallback.

The wire protocol is HTTP + JSON:

    POST /v1/sentiment  {"texts": [...]}  -> {"model": id, "labels": [...], "probs": [[p0..p9], ...]}
    POST /v1/abuse      {"texts": [...]}  -> {"model": id, "probs": [p, ...]}
    GET  /v1/health                       -> {"status": "ok", "models": [...]}

Texts are expected post-cleaning and pre-stopword-removal. Batches larger
than the configured maximum are split and the results concatenated, so the
response always parallels the request. Timeouts are retried once; remaining
failures either raise or, with the fallback backend, switch to the native
models and record the switch in ``events``.
"""
from __future__ import annotations

import enum
import logging
from dataclasses import dataclass
from typing import Callable, Sequence

import requests

from . import linear, tfidf
from .errors import ProtocolError, TransportError
from .scoring import N_LABELS, SENTIMENT_LABELS
from .textprep import tokenize

logger = logging.getLogger(__name__)

ABUSE_THRESHOLD = 0.5


class BackendMode(str, enum.Enum):
    NATIVE = "native"
    REMOTE = "remote"
    REMOTE_WITH_FALLBACK = "remote_fallback"


@dataclass(frozen=True)
class BackendSelection:
    mode: BackendMode
    endpoint: str = ""
    timeout_ms: int = 10_000
    max_batch_size: int = 64

    def __post_init__(self):
        if self.timeout_ms <= 0:
            raise ValueError("timeout_ms must be > 0")
        if self.max_batch_size < 1:
            raise ValueError("max_batch_size must be >= 1")
        if self.mode != BackendMode.NATIVE and not self.endpoint:
            raise ValueError(f"backend mode {self.mode.value} requires an endpoint")


@dataclass
class NativeModels:
    """Linear models plus their vocabularies, used directly or as fallback.

    ``tokenizer`` turns a cleaned text into classification tokens; it must
    match whatever fed the vocabularies at training time.
    """

    sentiment_model: linear.LinearModel
    sentiment_vocab: tfidf.Vocabulary
    abuse_model: linear.LinearModel
    abuse_vocab: tfidf.Vocabulary
    tokenizer: Callable[[str], list[str]] = tokenize

    def __post_init__(self):
        if self.sentiment_model.n_labels != N_LABELS:
            raise ValueError("sentiment model must have 10 label columns")
        if self.abuse_model.n_labels != 1:
            raise ValueError("abuse model must be binary")


@dataclass
class TransportResponse:
    status: int
    payload: dict | None


TransportFn = Callable[[str, str, dict | None, float], TransportResponse]


def http_transport(method: str, url: str, payload: dict | None,
                   timeout_s: float) -> TransportResponse:
    try:
        if method == "GET":
            response = requests.get(url, timeout=timeout_s)
        else:
            response = requests.post(url, json=payload, timeout=timeout_s)
    except requests.Timeout as exc:
        raise TimeoutError(f"{method} {url} timed out after {timeout_s}s") from exc
    except requests.RequestException as exc:
        raise ConnectionError(f"{method} {url} failed: {exc}") from exc
    try:
        body = response.json()
    except ValueError:
        body = None
    return TransportResponse(status=response.status_code, payload=body)


class InferenceClient:
    """Batch sentiment/abuse classification over the selected backend.

    Safe for shared use: per-call state is local and ``events`` only grows.
    """

    def __init__(self, backend: BackendSelection,
                 native: NativeModels | None = None,
                 transport: TransportFn | None = None):
        if backend.mode == BackendMode.NATIVE and native is None:
            raise ValueError("native backend requires native models")
        self.backend = backend
        self.native = native
        self.transport = transport or http_transport
        self.events: list[dict] = []

    @property
    def backend_used(self) -> str:
        return self.backend.mode.value

    def classify_sentiment_batch(self, texts: Sequence[str]) -> list[list[float]]:
        """One 10-probability vector per input text, in input order."""
        self._check_texts(texts)
        if self.backend.mode == BackendMode.NATIVE:
            return self._native_sentiment(texts)
        return self._remote(texts, "sentiment")

    def classify_abuse_batch(self, texts: Sequence[str]) -> list[tuple[float, int]]:
        """One (probability, binary label) pair per input text, in input order."""
        self._check_texts(texts)
        if self.backend.mode == BackendMode.NATIVE:
            return self._native_abuse(texts)
        probs = self._remote(texts, "abuse")
        return [(p, int(p >= ABUSE_THRESHOLD)) for p in probs]

    def health(self) -> dict:
        response = self._call("GET", "/v1/health", None)
        if response.status != 200 or not isinstance(response.payload, dict):
            raise ProtocolError(f"health check failed with status {response.status}")
        return response.payload

    # -- native path ---------------------------------------------------

    def _native_sentiment(self, texts: Sequence[str]) -> list[list[float]]:
        tokens = (self.native.tokenizer(t) for t in texts)
        vectors = (tfidf.transform(t, self.native.sentiment_vocab) for t in tokens)
        return [
            linear.predict_proba(self.native.sentiment_model, v).tolist() for v in vectors
        ]

    def _native_abuse(self, texts: Sequence[str]) -> list[tuple[float, int]]:
        pairs = []
        for text in texts:
            vector = tfidf.transform(self.native.tokenizer(text), self.native.abuse_vocab)
            p = float(linear.predict_proba(self.native.abuse_model, vector)[0])
            pairs.append((p, int(p >= ABUSE_THRESHOLD)))
        return pairs

    # -- remote path ---------------------------------------------------

    def _remote(self, texts: Sequence[str], task: str) -> list:
        results: list = []
        size = self.backend.max_batch_size
        for start in range(0, len(texts), size):
            chunk = list(texts[start:start + size])
            span = (start, start + len(chunk))
            try:
                results.extend(self._remote_chunk(chunk, task))
            except (TimeoutError, ConnectionError, TransportError) as exc:
                results.extend(self._fallback(chunk, task, span, exc))
        return results

    def _remote_chunk(self, chunk: list[str], task: str) -> list:
        path = f"/v1/{task}"
        payload = {"texts": chunk}
        try:
            response = self._call("POST", path, payload)
        except TimeoutError:
            logger.warning("timeout on %s, retrying once", path)
            response = self._call("POST", path, payload)
        if response.status != 200:
            detail = (response.payload or {}).get("error", "")
            if 400 <= response.status < 500:
                raise ProtocolError(f"{path} rejected with {response.status}: {detail}")
            raise TransportError(f"{path} failed with {response.status}: {detail}")
        return self._parse_payload(response.payload, task, len(chunk))

    def _call(self, method: str, path: str, payload: dict | None) -> TransportResponse:
        url = self.backend.endpoint.rstrip("/") + path
        return self.transport(method, url, payload, self.backend.timeout_ms / 1000.0)

    def _parse_payload(self, payload, task: str, expected: int) -> list:
        if not isinstance(payload, dict) or "probs" not in payload:
            raise ProtocolError(f"malformed {task} response: missing probs")
        probs = payload["probs"]
        if len(probs) != expected:
            raise ProtocolError(
                f"{task} response has {len(probs)} rows for {expected} texts"
            )
        if task == "sentiment":
            labels = payload.get("labels")
            if labels is not None and tuple(labels) != SENTIMENT_LABELS:
                raise ProtocolError(f"sentiment response labels {labels!r} are not canonical")
            for row in probs:
                if len(row) != N_LABELS or any(not 0.0 <= p <= 1.0 for p in row):
                    raise ProtocolError("sentiment probabilities must be 10 values in [0, 1]")
            return [list(map(float, row)) for row in probs]
        for p in probs:
            if not 0.0 <= p <= 1.0:
                raise ProtocolError("abuse probability outside [0, 1]")
        return [float(p) for p in probs]

    def _fallback(self, chunk: list[str], task: str, span: tuple[int, int],
                  exc: Exception) -> list:
        if self.backend.mode != BackendMode.REMOTE_WITH_FALLBACK or self.native is None:
            if isinstance(exc, TransportError):
                exc.batch_span = exc.batch_span or span
                raise exc
            raise TransportError(str(exc), batch_span=span) from exc
        self.events.append({
            "event": "fallback",
            "task": task,
            "span": list(span),
            "reason": str(exc),
        })
        logger.warning("falling back to native models for %s span %s: %s", task, span, exc)
        if task == "sentiment":
            return self._native_sentiment(chunk)
        return self._native_abuse(chunk)

    @staticmethod
    def _check_texts(texts: Sequence[str]) -> None:
        if len(texts) == 0:
            raise ValueError("texts must be a non-empty list")
        for position, text in enumerate(texts):
            if not text or not text.strip():
                raise ValueError(f"text at position {position} is empty after cleaning")

"""Inference client tests against stubbed transports and native models."""
import json
from pathlib import Path

import numpy as np
import pytest

from cinesent.client import (
    BackendMode,
    BackendSelection,
    InferenceClient,
    NativeModels,
    TransportResponse,
)
from cinesent.errors import ProtocolError, TransportError
from cinesent.linear import LOSS_LOGISTIC, TrainConfig, predict_proba, train
from cinesent.scoring import SENTIMENT_LABELS
from cinesent.tfidf import fit_vocabulary, transform, transform_many
from cinesent.textprep import tokenize

PROTOCOL_DIR = Path(__file__).parent / "fixtures" / "protocol"

STUB_VECTOR = [0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4, 0.45, 0.5]


def load_fixture(name):
    return json.loads((PROTOCOL_DIR / name).read_text())


class RecordingTransport:
    """Scripted transport: answers each text with a deterministic vector so
    ordering bugs are visible, and records every request."""

    def __init__(self, fail_first=0, fail_with=TimeoutError):
        self.calls = []
        self.failures_left = fail_first
        self.fail_with = fail_with

    def __call__(self, method, url, payload, timeout_s):
        self.calls.append({"method": method, "url": url, "payload": payload})
        if self.failures_left > 0:
            self.failures_left -= 1
            raise self.fail_with("scripted failure")
        if url.endswith("/v1/health"):
            return TransportResponse(200, {"status": "ok", "models": []})
        texts = payload["texts"]
        if url.endswith("/v1/sentiment"):
            probs = [self.vector_for(text) for text in texts]
            return TransportResponse(200, {
                "model": "scripted", "labels": list(SENTIMENT_LABELS), "probs": probs,
            })
        return TransportResponse(200, {
            "model": "scripted", "probs": [self.scalar_for(text) for text in texts],
        })

    @staticmethod
    def vector_for(text):
        base = (len(text) % 7) / 10.0
        return [min(1.0, base + i / 100.0) for i in range(10)]

    @staticmethod
    def scalar_for(text):
        return (len(text) % 10) / 10.0


def remote_backend(max_batch_size=64):
    return BackendSelection(mode=BackendMode.REMOTE, endpoint="http://svc",
                            timeout_ms=1000, max_batch_size=max_batch_size)


def make_native():
    rng = np.random.default_rng(42)
    docs = [tokenize(t) for t in (
        "good night friend", "what a wonderful day", "terrible awful loss",
        "you damn fool", "official report issued", "let go now",
    )]
    vocab = fit_vocabulary(docs)
    X = transform_many(docs, vocab)
    Y10 = rng.integers(0, 2, size=(len(docs), 10))
    y1 = rng.integers(0, 2, size=(len(docs), 1))
    sentiment = train(X, Y10, LOSS_LOGISTIC, TrainConfig(epochs=5, seed=1))
    abuse = train(X, y1, LOSS_LOGISTIC, TrainConfig(epochs=5, seed=2))
    return NativeModels(sentiment_model=sentiment, sentiment_vocab=vocab,
                        abuse_model=abuse, abuse_vocab=vocab)


def test_response_cardinality_and_order_match_request():
    transport = RecordingTransport()
    client = InferenceClient(remote_backend(), transport=transport)
    texts = ["one", "three", "seven", "fifteen"]
    vectors = client.classify_sentiment_batch(texts)
    assert len(vectors) == len(texts)
    assert vectors == [RecordingTransport.vector_for(t) for t in texts]


def test_stub_fixture_round_trips_verbatim():
    fixture = load_fixture("sentiment_batch.json")

    def transport(method, url, payload, timeout_s):
        assert payload == fixture["request"]
        return TransportResponse(fixture["status"], fixture["response"])

    client = InferenceClient(remote_backend(), transport=transport)
    vectors = client.classify_sentiment_batch(fixture["request"]["texts"])
    assert vectors == fixture["response"]["probs"]


def test_abuse_fixture_and_threshold_boundary():
    fixture = load_fixture("abuse_batch.json")

    def transport(method, url, payload, timeout_s):
        return TransportResponse(fixture["status"], fixture["response"])

    client = InferenceClient(remote_backend(), transport=transport)
    pairs = client.classify_abuse_batch(fixture["request"]["texts"])
    # probability exactly 0.5 counts positive
    assert pairs == [(0.5, 1), (0.5, 1), (0.5, 1)]


def test_batches_split_by_max_batch_size_and_concatenated_in_order():
    transport = RecordingTransport()
    client = InferenceClient(remote_backend(max_batch_size=3), transport=transport)
    texts = [f"text number {i}" for i in range(8)]
    vectors = client.classify_sentiment_batch(texts)
    sizes = [len(call["payload"]["texts"]) for call in transport.calls]
    assert sizes == [3, 3, 2]
    assert vectors == [RecordingTransport.vector_for(t) for t in texts]


def test_timeout_retried_once_then_succeeds():
    transport = RecordingTransport(fail_first=1, fail_with=TimeoutError)
    client = InferenceClient(remote_backend(), transport=transport)
    vectors = client.classify_sentiment_batch(["hello"])
    assert len(transport.calls) == 2
    assert len(vectors) == 1


def test_double_timeout_without_fallback_raises_with_batch_span():
    transport = RecordingTransport(fail_first=2, fail_with=TimeoutError)
    client = InferenceClient(remote_backend(), transport=transport)
    with pytest.raises(TransportError) as excinfo:
        client.classify_sentiment_batch(["hello", "there"])
    assert excinfo.value.batch_span == (0, 2)


def test_connection_error_not_retried():
    transport = RecordingTransport(fail_first=1, fail_with=ConnectionError)
    client = InferenceClient(remote_backend(), transport=transport)
    with pytest.raises(TransportError):
        client.classify_abuse_batch(["hello"])
    assert len(transport.calls) == 1


def test_fallback_to_native_is_recorded_not_silent():
    transport = RecordingTransport(fail_first=10, fail_with=ConnectionError)
    native = make_native()
    backend = BackendSelection(mode=BackendMode.REMOTE_WITH_FALLBACK,
                               endpoint="http://svc", timeout_ms=100, max_batch_size=64)
    client = InferenceClient(backend, native=native, transport=transport)
    texts = ["good night friend", "you damn fool"]
    vectors = client.classify_sentiment_batch(texts)
    assert len(vectors) == 2
    assert len(client.events) == 1
    assert client.events[0]["event"] == "fallback"
    assert client.events[0]["task"] == "sentiment"
    assert client.events[0]["span"] == [0, 2]


def test_native_backend_matches_direct_model_predictions():
    native = make_native()
    backend = BackendSelection(mode=BackendMode.NATIVE)
    client = InferenceClient(backend, native=native)
    texts = ["good night friend", "unknown words entirely"]
    vectors = client.classify_sentiment_batch(texts)
    for text, probs in zip(texts, vectors):
        direct = predict_proba(
            native.sentiment_model, transform(tokenize(text), native.sentiment_vocab)
        )
        np.testing.assert_array_equal(np.array(probs), direct)
    again = client.classify_sentiment_batch(texts)
    assert again == vectors  # bitwise deterministic


def test_native_abuse_pairs_probability_with_threshold_label():
    client = InferenceClient(BackendSelection(mode=BackendMode.NATIVE), native=make_native())
    for p, label in client.classify_abuse_batch(["you damn fool", "good night friend"]):
        assert 0.0 < p < 1.0
        assert label == int(p >= 0.5)


def test_empty_text_list_rejected():
    client = InferenceClient(remote_backend(), transport=RecordingTransport())
    with pytest.raises(ValueError):
        client.classify_sentiment_batch([])


def test_blank_text_rejected_naming_position():
    client = InferenceClient(remote_backend(), transport=RecordingTransport())
    with pytest.raises(ValueError) as excinfo:
        client.classify_sentiment_batch(["fine", "   "])
    assert "position 1" in str(excinfo.value)


@pytest.mark.parametrize("payload", [
    {"model": "x"},                                                # missing probs
    {"model": "x", "probs": [[0.1] * 10]},                         # wrong cardinality
    {"model": "x", "probs": [[0.1] * 9, [0.1] * 9]},               # wrong width
    {"model": "x", "probs": [[1.5] * 10, [0.1] * 10]},             # out of range
    {"model": "x", "labels": ["a"] * 10, "probs": [[0.1] * 10] * 2},  # bad labels
])
def test_malformed_sentiment_responses_raise_protocol_error(payload):
    def transport(method, url, body, timeout_s):
        return TransportResponse(200, payload)

    client = InferenceClient(remote_backend(), transport=transport)
    with pytest.raises(ProtocolError):
        client.classify_sentiment_batch(["a", "b"])


def test_http_400_and_413_surface_as_protocol_errors():
    for fixture_name in ("empty_list_sentiment.json", "oversize_batch.json"):
        fixture = load_fixture(fixture_name)

        def transport(method, url, body, timeout_s, fixture=fixture):
            return TransportResponse(fixture["status"], fixture["response"])

        client = InferenceClient(remote_backend(), transport=transport)
        with pytest.raises(ProtocolError) as excinfo:
            client.classify_abuse_batch(["x"])
        assert fixture["response"]["error"] in str(excinfo.value)


def test_health_endpoint():
    client = InferenceClient(remote_backend(), transport=RecordingTransport())
    assert client.health()["status"] == "ok"


def test_backend_selection_validation():
    with pytest.raises(ValueError):
        BackendSelection(mode=BackendMode.REMOTE)  # endpoint required
    with pytest.raises(ValueError):
        BackendSelection(mode=BackendMode.NATIVE, timeout_ms=0)
    with pytest.raises(ValueError):
        BackendSelection(mode=BackendMode.NATIVE, max_batch_size=0)
    with pytest.raises(ValueError):
        InferenceClient(BackendSelection(mode=BackendMode.NATIVE))  # needs models

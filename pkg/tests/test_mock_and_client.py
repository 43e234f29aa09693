from __future__ import annotations

import json
import time

import pytest
import requests

from affekt.ingest import RawRecord, enrich
from affekt.orchestrator.client import ClientConfig, EndpointClient, classify_one
from affekt.orchestrator.mock import (
    MockBehavior,
    MockEmotionServer,
    classify_text,
    mock_serve,
)
from affekt.orchestrator.pool import EndpointPool
from affekt.orchestrator.schema import (
    FailureRecord,
    ResponseValidationError,
    build_prompt,
    parse_and_validate,
)


def record(headline, outlet="A"):
    return enrich(RawRecord(source_id="x", outlet=outlet, headline=headline))


@pytest.fixture()
def server():
    srv = MockEmotionServer().start()
    yield srv
    srv.stop()


class TestRuleClassifier:
    def test_anger_keyword(self):
        result = classify_text("শহরে আগুন লেগেছে আজ")
        assert result["dominant_emotion"] == "anger"
        assert sum(result["probabilities"].values()) == pytest.approx(1.0)

    def test_no_keyword_is_neutral(self):
        result = classify_text("সরকার নতুন প্রকল্প ঘোষণা করেছে")
        assert result["dominant_emotion"] == "neutral"

    def test_output_passes_validation(self):
        rec = record("বন্যায় জেলার মানুষ আতঙ্ক অবস্থায়")
        text = mock_serve({"prompt": build_prompt(rec)})
        ann = parse_and_validate(text, record_id=rec.record_id)
        assert ann.dominant == "fear"

    def test_deterministic(self):
        rec = record("দেশের দল জয় পেয়েছে আজ")
        req = {"prompt": build_prompt(rec)}
        assert mock_serve(req) == mock_serve(req)


class TestMockServer:
    def post(self, server, prompt="খবর আজ প্রকাশিত", headers=None):
        return requests.post(
            server.base_url + "/api/generate",
            json={"model": "m", "prompt": f"Headline: {prompt}", "temperature": 0, "max_tokens": 64},
            headers=headers or {},
            timeout=5,
        )

    def test_ok_roundtrip(self, server):
        resp = self.post(server, "আগুন লেগেছে শহরে")
        assert resp.status_code == 200
        ann = parse_and_validate(resp.json()["response"])
        assert ann.dominant == "anger"

    def test_malformed_mode_fails_validation(self, server):
        resp = self.post(server, headers={"X-Mock-Fault": "malformed"})
        assert resp.status_code == 200
        with pytest.raises(ResponseValidationError) as err:
            parse_and_validate(resp.json()["response"])
        assert err.value.reason == "malformed_json"

    def test_latency_injection(self, server):
        started = time.perf_counter()
        self.post(server, headers={"X-Mock-Latency-Ms": "120"})
        assert time.perf_counter() - started >= 0.12

    def test_drop_mode_breaks_transport(self, server):
        with pytest.raises(requests.RequestException):
            self.post(server, headers={"X-Mock-Fault": "drop"})

    def test_http_error_mode(self, server):
        resp = self.post(server, headers={"X-Mock-Fault": "http_error"})
        assert resp.status_code == 500


class TestClassifyOne:
    def client(self, **kwargs):
        kwargs.setdefault("timeout_s", 3.0)
        kwargs.setdefault("model_id", "mock-emotion")
        return EndpointClient(ClientConfig(**kwargs))

    def test_success_counts_endpoint(self, server):
        pool = EndpointPool([server.base_url])
        ann = classify_one(record("আগুন লেগেছে আজ শহরে"), pool, self.client())
        assert ann.dominant == "anger"
        assert pool.endpoints[0].calls_completed == 1
        assert ann.latency_ms > 0

    def test_failover_to_healthy_endpoint(self):
        bad = MockEmotionServer(MockBehavior(mode="drop")).start()
        good = MockEmotionServer().start()
        try:
            pool = EndpointPool([bad.base_url, good.base_url])
            ann = classify_one(record("দল জয় পেয়েছে আজকে"), pool, self.client())
            assert not isinstance(ann, FailureRecord)
            assert ann.endpoint_id == good.base_url
            assert pool.endpoints[0].health == "suspect"
        finally:
            bad.stop()
            good.stop()

    def test_invalid_unicode_fails_fast(self, server):
        rec = record("ভাল খবর আজকে প্রকাশিত")
        rec.headline = rec.headline + "\ud800"  # unpaired surrogate artifact
        pool = EndpointPool([server.base_url])
        result = classify_one(rec, pool, self.client())
        assert isinstance(result, FailureRecord)
        assert result.reason == "invalid_input"
        assert pool.endpoints[0].calls_completed == 0

    def test_persistent_malformed_fails_after_one_retry(self):
        srv = MockEmotionServer(MockBehavior(mode="malformed")).start()
        try:
            pool = EndpointPool([srv.base_url])
            result = classify_one(record("খবর আজ প্রকাশিত"), pool, self.client())
            assert isinstance(result, FailureRecord)
            assert result.reason == "malformed_json"
            assert result.attempts == 2  # one retry on the same endpoint
        finally:
            srv.stop()

    def test_exhausted_retries_when_everything_drops(self):
        servers = [MockEmotionServer(MockBehavior(mode="drop")).start() for _ in range(2)]
        try:
            pool = EndpointPool(
                [s.base_url for s in servers], max_consecutive_failures=10
            )
            result = classify_one(
                record("খবর আজ প্রকাশিত"), pool, self.client(max_item_retries=3)
            )
            assert isinstance(result, FailureRecord)
            assert result.reason == "exhausted_retries"
        finally:
            for s in servers:
                s.stop()

    def test_timeout_is_a_transport_error(self):
        srv = MockEmotionServer(MockBehavior(mode="timeout", timeout_hold_s=5)).start()
        good = MockEmotionServer().start()
        try:
            pool = EndpointPool([srv.base_url, good.base_url])
            ann = classify_one(
                record("খবর আজ প্রকাশিত"), pool, self.client(timeout_s=0.3)
            )
            assert not isinstance(ann, FailureRecord)
            assert ann.endpoint_id == good.base_url
        finally:
            srv.stop()
            good.stop()

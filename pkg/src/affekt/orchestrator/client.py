"""HTTP transport to inference endpoints and the per-item retry policy."""
from __future__ import annotations

import threading
import time
from dataclasses import dataclass
from typing import Union

import requests

from ..ingest import NewsRecord
from .pool import AllEndpointsDown, Endpoint, EndpointPool
from .schema import (
    EmotionAnnotation,
    FailureRecord,
    ResponseValidationError,
    build_prompt,
    parse_and_validate,
)


class TransportError(Exception):
    """Connection, timeout, or non-2xx failure talking to an endpoint."""


@dataclass
class ClientConfig:
    route: str = "/api/generate"
    timeout_s: float = 30.0
    model_id: str = "local-llm"
    temperature: float = 0.0
    max_tokens: int = 256
    max_body_chars: int = 1000
    max_item_retries: int = 3  # total transport attempts per item
    backoff_base_s: float = 1.0
    backoff_cap_s: float = 60.0


class EndpointClient:
    """Thin wrapper over requests with one session per worker thread."""

    def __init__(self, config: ClientConfig):
        self.config = config
        self._local = threading.local()

    def _session(self) -> requests.Session:
        if not hasattr(self._local, "session"):
            self._local.session = requests.Session()
        return self._local.session

    def generate(self, endpoint: Endpoint, prompt: str) -> tuple[str, float]:
        """POST one request; returns (text payload, latency in ms)."""
        url = endpoint.base_url.rstrip("/") + self.config.route
        body = {
            "model": self.config.model_id,
            "prompt": prompt,
            "temperature": self.config.temperature,
            "max_tokens": self.config.max_tokens,
        }
        started = time.perf_counter()
        try:
            resp = self._session().post(url, json=body, timeout=self.config.timeout_s)
        except requests.RequestException as exc:
            raise TransportError(f"{endpoint.id}: {exc.__class__.__name__}") from exc
        latency_ms = (time.perf_counter() - started) * 1000.0
        if resp.status_code != 200:
            raise TransportError(f"{endpoint.id}: HTTP {resp.status_code}")
        try:
            payload = resp.json()
        except ValueError as exc:
            raise TransportError(f"{endpoint.id}: non-JSON envelope") from exc
        text = payload.get("response")
        if not isinstance(text, str):
            raise TransportError(f"{endpoint.id}: envelope missing 'response'")
        return text, latency_ms


def _encodable(record: NewsRecord) -> bool:
    try:
        record.headline.encode("utf-8")
        if record.body:
            record.body.encode("utf-8")
    except UnicodeEncodeError:
        return False
    return True


def classify_one(
    record: NewsRecord,
    pool: EndpointPool,
    client: EndpointClient,
    sleep=time.sleep,
) -> Union[EmotionAnnotation, FailureRecord]:
    """Classify one record with failover.

    Transport errors rotate to the next endpoint, spending one of
    ``max_item_retries`` total attempts each time. A validation error gets
    one immediate retry on the same endpoint before the item is failed.
    Inputs that cannot even be encoded (unpaired surrogates and similar
    artifacts) fail fast as ``invalid_input`` without burning any attempts.
    When every endpoint is down the call blocks on exponential backoff
    (base 1s, capped) until one becomes eligible again.
    """
    if not _encodable(record):
        return FailureRecord(record.record_id, "invalid_input",
                             detail="text not encodable as UTF-8")

    cfg = client.config
    prompt = build_prompt(record, max_body_chars=cfg.max_body_chars)
    attempts = 0
    last_error = ""
    backoff = cfg.backoff_base_s

    while attempts < cfg.max_item_retries:
        try:
            endpoint = pool.next_endpoint()
        except AllEndpointsDown:
            sleep(backoff)
            backoff = min(backoff * 2, cfg.backoff_cap_s)
            continue
        backoff = cfg.backoff_base_s

        validation_tries = 0
        while True:
            attempts += 1
            try:
                text, latency_ms = client.generate(endpoint, prompt)
            except TransportError as exc:
                pool.record_failure(endpoint)
                last_error = str(exc)
                break  # rotate to the next endpoint
            try:
                annotation = parse_and_validate(
                    text,
                    record_id=record.record_id,
                    endpoint_id=endpoint.id,
                    latency_ms=latency_ms,
                    model_id=cfg.model_id,
                )
            except ResponseValidationError as exc:
                validation_tries += 1
                last_error = f"{exc.reason}: {exc.fragment}"
                if validation_tries >= 2 or attempts >= cfg.max_item_retries:
                    return FailureRecord(
                        record.record_id, exc.reason,
                        detail=exc.fragment, attempts=attempts,
                    )
                continue  # one more try on the same endpoint
            pool.record_success(endpoint)
            return annotation

    return FailureRecord(
        record.record_id, "exhausted_retries", detail=last_error, attempts=attempts
    )

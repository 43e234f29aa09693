"""Deterministic mock inference endpoint for offline runs and tests.

The classifier is a fixed bilingual keyword table: first rule whose keyword
appears among the headline tokens wins, no keyword means neutral. The HTTP
wrapper speaks the same generate-style wire protocol as a real local LLM
server and supports fault injection (latency, timeout, malformed payload,
dropped connection, HTTP error) via server config or per-request header.
"""
from __future__ import annotations

import json
import threading
import time
from dataclasses import dataclass, replace
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

import regex

_TOKEN_RE = regex.compile(r"\w+")

# Ordered rule table; first hit wins.
KEYWORD_RULES: tuple[tuple[str, frozenset[str]], ...] = (
    ("anger", frozenset({"আগুন", "হামলা", "সংঘর্ষ", "fire", "attack", "clash"})),
    ("fear", frozenset({"আতঙ্ক", "ভয়", "সংকট", "panic", "crisis"})),
    ("sadness", frozenset({"মৃত্যু", "শোক", "নিহত", "death", "mourning"})),
    ("joy", frozenset({"জয়", "উৎসব", "জয়ী", "victory", "festival"})),
    ("optimism", frozenset({"আশা", "প্রত্যাশা", "hope", "recovery"})),
)


def _tokens(text: str) -> set[str]:
    return {t.casefold() for t in _TOKEN_RE.findall(text)}


def classify_text(text: str) -> dict:
    """Rule-table classification of one headline into the response schema."""
    tokens = _tokens(text)
    for label, keywords in KEYWORD_RULES:
        if tokens & keywords:
            probs = {label: 0.7, "neutral": 0.2, "curiosity": 0.1}
            return {
                "dominant_emotion": label,
                "probabilities": probs,
                "confidence": 0.7,
            }
    return {
        "dominant_emotion": "neutral",
        "probabilities": {"neutral": 0.8, "approval": 0.1, "curiosity": 0.1},
        "confidence": 0.8,
    }


def headline_from_prompt(prompt: str) -> str:
    """Pull the headline line back out of the rendered prompt."""
    for line in prompt.splitlines():
        if line.startswith("Headline:"):
            return line[len("Headline:"):].strip()
    return prompt


def mock_serve(request: dict) -> str:
    """Produce the text payload for one inference request dict."""
    prompt = str(request.get("prompt", ""))
    result = classify_text(headline_from_prompt(prompt))
    return json.dumps(result, ensure_ascii=False)


@dataclass
class MockBehavior:
    latency_ms: float = 0.0
    mode: str = "ok"  # ok | malformed | http_error | timeout | drop
    timeout_hold_s: float = 60.0


class _Handler(BaseHTTPRequestHandler):
    protocol_version = "HTTP/1.1"

    def log_message(self, fmt, *args):  # keep test output quiet
        pass

    def do_POST(self):
        server: "MockEmotionServer" = self.server  # type: ignore[assignment]
        if server.dead:
            # A stopped server must also kill keep-alive connections, or
            # clients with pooled sockets would never see it die.
            self.close_connection = True
            self.connection.close()
            return
        with server.lock:
            server.requests_handled += 1
            behavior = server.behavior

        mode = self.headers.get("X-Mock-Fault", behavior.mode)
        latency_ms = float(self.headers.get("X-Mock-Latency-Ms", behavior.latency_ms))
        if latency_ms > 0:
            time.sleep(latency_ms / 1000.0)

        if mode == "drop":
            self.close_connection = True
            self.connection.close()
            return
        if mode == "timeout":
            time.sleep(behavior.timeout_hold_s)
            self.close_connection = True
            self.connection.close()
            return
        if mode == "http_error":
            self._reply(500, {"error": "injected server error"})
            return

        length = int(self.headers.get("Content-Length", 0))
        try:
            request = json.loads(self.rfile.read(length).decode("utf-8"))
        except (ValueError, UnicodeDecodeError):
            self._reply(400, {"error": "bad request body"})
            return

        if mode == "malformed":
            text = "not json {{{"
        else:
            text = mock_serve(request)
        self._reply(200, {
            "model": request.get("model", "mock-emotion"),
            "response": text,
            "done": True,
        })

    def _reply(self, status: int, doc: dict) -> None:
        body = json.dumps(doc, ensure_ascii=False).encode("utf-8")
        self.send_response(status)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)


class MockEmotionServer(ThreadingHTTPServer):
    """In-process mock endpoint bound to an ephemeral localhost port."""

    daemon_threads = True
    allow_reuse_address = True

    def __init__(self, behavior: MockBehavior | None = None):
        super().__init__(("127.0.0.1", 0), _Handler)
        self.behavior = behavior or MockBehavior()
        self.requests_handled = 0
        self.dead = False
        self.lock = threading.Lock()
        self._thread: threading.Thread | None = None

    @property
    def base_url(self) -> str:
        host, port = self.server_address[:2]
        return f"http://{host}:{port}"

    def start(self) -> "MockEmotionServer":
        self._thread = threading.Thread(target=self.serve_forever, daemon=True)
        self._thread.start()
        return self

    def stop(self) -> None:
        self.dead = True
        self.shutdown()
        self.server_close()
        if self._thread is not None:
            self._thread.join(timeout=5)


def start_mock_pool(
    n: int = 3, behavior: MockBehavior | None = None
) -> list[MockEmotionServer]:
    servers = []
    for _ in range(n):
        own = replace(behavior) if behavior is not None else MockBehavior()
        servers.append(MockEmotionServer(own).start())
    return servers

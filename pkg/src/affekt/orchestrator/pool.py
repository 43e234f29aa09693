"""Round-robin endpoint pool with health-based failover.

Health model: one failure moves an endpoint from healthy to suspect; after
``max_consecutive_failures`` (default 3) it is down and gets skipped by the
rotation. Any success resets it to healthy. A down endpoint becomes eligible
again as a single probe after ``down_retry_seconds``, so a recovered server
rejoins the rotation without manual intervention.

All state mutation happens under one lock; the pool is the only shared
mutable structure between workers.
"""
from __future__ import annotations

import threading
import time
from dataclasses import dataclass


class AllEndpointsDown(Exception):
    """Every endpoint in the pool is currently down."""


@dataclass
class Endpoint:
    id: str
    base_url: str
    health: str = "healthy"  # healthy | suspect | down
    consecutive_failures: int = 0
    calls_completed: int = 0
    down_since: float | None = None


class EndpointPool:
    def __init__(
        self,
        base_urls: list[str],
        max_consecutive_failures: int = 3,
        down_retry_seconds: float = 30.0,
        clock=time.monotonic,
    ):
        if not base_urls:
            raise ValueError("endpoint pool needs at least one URL")
        self.endpoints = [Endpoint(id=url, base_url=url) for url in base_urls]
        self.max_consecutive_failures = max_consecutive_failures
        self.down_retry_seconds = down_retry_seconds
        self._clock = clock
        self._cursor = 0
        self._lock = threading.Lock()

    def _eligible(self, ep: Endpoint, now: float) -> bool:
        if ep.health != "down":
            return True
        # Probe a down endpoint once its retry window elapses.
        return ep.down_since is not None and now - ep.down_since >= self.down_retry_seconds

    def next_endpoint(self) -> Endpoint:
        """Next endpoint in cyclic order, skipping down ones.

        The cursor advances exactly once per returned endpoint, so healthy
        pools see a strict round-robin. Raises AllEndpointsDown when nothing
        is eligible.
        """
        now = self._clock()
        with self._lock:
            n = len(self.endpoints)
            for i in range(n):
                idx = (self._cursor + i) % n
                ep = self.endpoints[idx]
                if self._eligible(ep, now):
                    self._cursor = (idx + 1) % n
                    return ep
            raise AllEndpointsDown(
                f"all {n} endpoints down; retry after backoff"
            )

    def record_success(self, ep: Endpoint) -> None:
        with self._lock:
            ep.health = "healthy"
            ep.consecutive_failures = 0
            ep.down_since = None
            ep.calls_completed += 1

    def record_failure(self, ep: Endpoint) -> None:
        with self._lock:
            ep.consecutive_failures += 1
            if ep.consecutive_failures >= self.max_consecutive_failures:
                ep.health = "down"
                ep.down_since = self._clock()
            else:
                ep.health = "suspect"

    def snapshot(self) -> list[dict]:
        with self._lock:
            return [
                {
                    "id": ep.id,
                    "health": ep.health,
                    "consecutive_failures": ep.consecutive_failures,
                    "calls_completed": ep.calls_completed,
                }
                for ep in self.endpoints
            ]

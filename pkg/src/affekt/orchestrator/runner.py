"""Checkpointed batch inference runs with crash-safe resumption.

A run owns a timestamped directory:

    runs/<ts>/manifest.json      corpus path + hash, endpoints, status
    runs/<ts>/annotations.jsonl  one validated annotation per line, appended
    runs/<ts>/failures.jsonl     one failure record per line, appended
    runs/<ts>/checkpoint.json    durable progress, rewritten atomically
    runs/<ts>/report.json        final counters, written on completion

Exactly-once is enforced at the write funnel: every annotation line carries
its record id and endpoint attribution, the writer suppresses duplicate ids,
and resumption rebuilds authoritative state by scanning the annotation and
failure files rather than trusting checkpoint counters that may lag by up to
one checkpoint interval. The checkpoint carries what a scan cannot recover
(accumulated wall clock) plus a fast-path copy of progress for inspection.
"""
from __future__ import annotations

import json
import os
import shutil
import threading
import time
from collections import Counter
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from queue import Queue
from typing import Iterable

from ..ingest import NewsRecord, corpus_sha256, load_corpus
from .client import ClientConfig, EndpointClient, classify_one
from .pool import EndpointPool
from .schema import EmotionAnnotation, FailureRecord


class CheckpointError(Exception):
    """Checkpoint state is unusable; resumption refused."""


@dataclass
class RunnerConfig:
    workers: int = 6
    checkpoint_every: int = 500
    model_id: str = "local-llm"
    route: str = "/api/generate"
    timeout_s: float = 30.0
    temperature: float = 0.0
    max_tokens: int = 256
    max_body_chars: int = 1000
    max_item_retries: int = 3
    max_consecutive_failures: int = 3
    down_retry_seconds: float = 30.0
    backoff_base_s: float = 1.0
    backoff_cap_s: float = 60.0

    def client_config(self) -> ClientConfig:
        return ClientConfig(
            route=self.route,
            timeout_s=self.timeout_s,
            model_id=self.model_id,
            temperature=self.temperature,
            max_tokens=self.max_tokens,
            max_body_chars=self.max_body_chars,
            max_item_retries=self.max_item_retries,
            backoff_base_s=self.backoff_base_s,
            backoff_cap_s=self.backoff_cap_s,
        )

    def build_pool(self, base_urls: list[str]) -> EndpointPool:
        return EndpointPool(
            base_urls,
            max_consecutive_failures=self.max_consecutive_failures,
            down_retry_seconds=self.down_retry_seconds,
        )


@dataclass
class RunReport:
    total_items: int
    succeeded: int
    failed: int
    mean_latency_ms: float
    throughput_items_per_min: float
    per_endpoint_counts: dict[str, int]
    wall_clock_seconds: float

    def to_json(self) -> dict:
        return {
            "total_items": self.total_items,
            "succeeded": self.succeeded,
            "failed": self.failed,
            "mean_latency_ms": self.mean_latency_ms,
            "throughput_items_per_min": self.throughput_items_per_min,
            "per_endpoint_counts": dict(self.per_endpoint_counts),
            "wall_clock_seconds": self.wall_clock_seconds,
        }

    @classmethod
    def from_json(cls, doc: dict) -> "RunReport":
        return cls(
            total_items=doc["total_items"],
            succeeded=doc["succeeded"],
            failed=doc["failed"],
            mean_latency_ms=doc["mean_latency_ms"],
            throughput_items_per_min=doc["throughput_items_per_min"],
            per_endpoint_counts=dict(doc["per_endpoint_counts"]),
            wall_clock_seconds=doc["wall_clock_seconds"],
        )


def _utc_now() -> datetime:
    return datetime.now(timezone.utc)


def _atomic_write_json(path: Path, doc: dict) -> None:
    tmp = path.with_suffix(path.suffix + ".tmp")
    with open(tmp, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, ensure_ascii=False)
        fh.flush()
        os.fsync(fh.fileno())
    os.replace(tmp, path)


def _scan_jsonl(path: Path) -> Iterable[dict]:
    """Yield parseable objects; a corrupt tail line (torn write at a crash)
    is skipped silently, anything else corrupt is skipped too."""
    if not path.exists():
        return
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            try:
                doc = json.loads(line)
            except json.JSONDecodeError:
                continue
            if isinstance(doc, dict):
                yield doc


def load_annotations(run_dir: str | Path) -> list[EmotionAnnotation]:
    out = []
    for doc in _scan_jsonl(Path(run_dir) / "annotations.jsonl"):
        out.append(EmotionAnnotation.from_json(doc))
    return out


def load_failures(run_dir: str | Path) -> list[FailureRecord]:
    out = []
    for doc in _scan_jsonl(Path(run_dir) / "failures.jsonl"):
        out.append(
            FailureRecord(
                record_id=doc["record_id"],
                reason=doc["reason"],
                detail=doc.get("detail", ""),
                attempts=int(doc.get("attempts", 0)),
            )
        )
    return out


@dataclass
class _PriorState:
    """State recovered before a session starts (empty for a fresh run)."""

    written: dict[str, tuple[str, float]] = field(default_factory=dict)  # id -> (endpoint, latency)
    failed: dict[str, str] = field(default_factory=dict)  # id -> reason
    wall_clock_seconds: float = 0.0


class _RunWriter:
    """Single funnel for annotation/failure/checkpoint writes."""

    def __init__(
        self,
        run_dir: Path,
        run_id: str,
        corpus_ids: list[str],
        prior: _PriorState,
        checkpoint_every: int,
    ):
        self.run_dir = run_dir
        self.run_id = run_id
        self.checkpoint_every = checkpoint_every
        self._lock = threading.Lock()

        self.written_ids: set[str] = set(prior.written)
        self.failed: dict[str, str] = dict(prior.failed)
        self.per_endpoint_counts: Counter = Counter(
            ep for ep, _ in prior.written.values()
        )
        self.latency_sum_ms = sum(lat for _, lat in prior.written.values())
        self.latency_count = len(prior.written)
        self.prior_wall_clock = prior.wall_clock_seconds
        self.session_started = time.monotonic()

        self._positions = {rid: i for i, rid in enumerate(corpus_ids)}
        self._done = [False] * len(corpus_ids)
        for rid in list(self.written_ids) + list(self.failed):
            pos = self._positions.get(rid)
            if pos is not None:
                self._done[pos] = True
        self._hwm = 0
        self._advance_hwm()

        self._since_checkpoint = 0
        self._ann_fh = open(run_dir / "annotations.jsonl", "a", encoding="utf-8")
        self._fail_fh = open(run_dir / "failures.jsonl", "a", encoding="utf-8")

    def _advance_hwm(self) -> None:
        while self._hwm < len(self._done) and self._done[self._hwm]:
            self._hwm += 1

    def _mark_done(self, record_id: str) -> None:
        pos = self._positions.get(record_id)
        if pos is not None:
            self._done[pos] = True
            self._advance_hwm()

    def record_success(self, ann: EmotionAnnotation) -> bool:
        """Persist one annotation; returns False when the id was already
        written (duplicate suppressed)."""
        with self._lock:
            if ann.record_id in self.written_ids:
                return False
            self._ann_fh.write(json.dumps(ann.to_json(), ensure_ascii=False) + "\n")
            self._ann_fh.flush()
            self.written_ids.add(ann.record_id)
            self.per_endpoint_counts[ann.endpoint_id] += 1
            self.latency_sum_ms += ann.latency_ms
            self.latency_count += 1
            self._mark_done(ann.record_id)
            self._bump_checkpoint()
            return True

    def record_failure(self, failure: FailureRecord) -> bool:
        with self._lock:
            if failure.record_id in self.failed or failure.record_id in self.written_ids:
                return False
            self._fail_fh.write(json.dumps(failure.to_json(), ensure_ascii=False) + "\n")
            self._fail_fh.flush()
            self.failed[failure.record_id] = failure.reason
            self._mark_done(failure.record_id)
            self._bump_checkpoint()
            return True

    def _bump_checkpoint(self) -> None:
        self._since_checkpoint += 1
        if self._since_checkpoint >= self.checkpoint_every:
            self._flush_checkpoint()

    def wall_clock_seconds(self) -> float:
        return self.prior_wall_clock + (time.monotonic() - self.session_started)

    def _flush_checkpoint(self) -> None:
        # Data files first: the checkpoint must never claim more than disk has.
        for fh in (self._ann_fh, self._fail_fh):
            fh.flush()
            os.fsync(fh.fileno())
        current = self.run_dir / "checkpoint.json"
        if current.exists():
            # Advisory fallback copy; current stays valid throughout.
            shutil.copyfile(current, self.run_dir / "checkpoint.prev.json")
        doc = {
            "run_id": self.run_id,
            "high_water_mark": self._hwm,
            "completed_ids": sorted(self.written_ids),
            "per_endpoint_counts": dict(self.per_endpoint_counts),
            "failed": [
                {"record_id": rid, "reason": reason}
                for rid, reason in sorted(self.failed.items())
            ],
            "latency_sum_ms": self.latency_sum_ms,
            "latency_count": self.latency_count,
            "wall_clock_seconds": self.wall_clock_seconds(),
            "checkpointed_at": _utc_now().isoformat(),
        }
        _atomic_write_json(self.run_dir / "checkpoint.json", doc)
        self._since_checkpoint = 0

    def checkpoint_now(self) -> None:
        with self._lock:
            self._flush_checkpoint()

    def close(self) -> None:
        with self._lock:
            self._flush_checkpoint()
            self._ann_fh.close()
            self._fail_fh.close()


def _write_manifest(run_dir: Path, doc: dict) -> None:
    _atomic_write_json(run_dir / "manifest.json", doc)


def _read_json(path: Path) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def _make_run_dir(runs_root: Path) -> tuple[str, Path]:
    runs_root.mkdir(parents=True, exist_ok=True)
    now = _utc_now()
    base = f"{now:%Y%m%dT%H%M%S}_{now.microsecond:06d}Z"
    run_id, attempt = base, 0
    while True:
        run_dir = runs_root / run_id
        try:
            run_dir.mkdir()
            return run_id, run_dir
        except FileExistsError:
            attempt += 1
            run_id = f"{base}-{attempt}"


def _execute(
    run_dir: Path,
    run_id: str,
    corpus: list[NewsRecord],
    pending: list[NewsRecord],
    pool: EndpointPool,
    config: RunnerConfig,
    prior: _PriorState,
    manifest: dict,
) -> RunReport:
    writer = _RunWriter(
        run_dir, run_id, [r.record_id for r in corpus], prior, config.checkpoint_every
    )
    client = EndpointClient(config.client_config())

    work: Queue = Queue()
    for record in pending:
        work.put(record)
    for _ in range(config.workers):
        work.put(None)

    def worker() -> None:
        while True:
            record = work.get()
            if record is None:
                return
            try:
                result = classify_one(record, pool, client)
            except Exception as exc:  # keep the run alive; surface in failures
                result = FailureRecord(
                    record.record_id, "internal_error", detail=repr(exc)
                )
            if isinstance(result, FailureRecord):
                writer.record_failure(result)
            else:
                writer.record_success(result)

    threads = [
        threading.Thread(target=worker, name=f"affekt-worker-{i}", daemon=True)
        for i in range(config.workers)
    ]
    for t in threads:
        t.start()
    for t in threads:
        t.join()

    writer.close()

    succeeded = len(writer.written_ids)
    failed = len(writer.failed)
    if succeeded + failed != len(corpus):
        raise RuntimeError(
            f"run incomplete: {succeeded}+{failed} processed of {len(corpus)}"
        )
    wall = writer.wall_clock_seconds()
    mean_latency = (
        writer.latency_sum_ms / writer.latency_count if writer.latency_count else 0.0
    )
    throughput = succeeded / (wall / 60.0) if wall > 0 else 0.0
    report = RunReport(
        total_items=len(corpus),
        succeeded=succeeded,
        failed=failed,
        mean_latency_ms=mean_latency,
        throughput_items_per_min=throughput,
        per_endpoint_counts=dict(writer.per_endpoint_counts),
        wall_clock_seconds=wall,
    )
    _atomic_write_json(run_dir / "report.json", report.to_json())
    manifest["status"] = "complete"
    manifest["counts"] = {"succeeded": succeeded, "failed": failed}
    _write_manifest(run_dir, manifest)
    return report


def run_batch(
    corpus: list[NewsRecord],
    pool: EndpointPool,
    config: RunnerConfig,
    runs_root: str | Path,
    corpus_path: str | Path | None = None,
) -> RunReport:
    """Process every corpus record exactly once; returns the final report.

    ``corpus_path`` (when given) is recorded in the manifest with its content
    hash so the run can be resumed without re-supplying the corpus.
    """
    run_id, run_dir = _make_run_dir(Path(runs_root))
    manifest = {
        "run_id": run_id,
        "corpus_path": str(Path(corpus_path).resolve()) if corpus_path else None,
        "corpus_sha256": corpus_sha256(corpus_path) if corpus_path else None,
        "model_id": config.model_id,
        "endpoints": [ep.base_url for ep in pool.endpoints],
        "created_at": _utc_now().isoformat(),
        "status": "running",
        "counts": {"succeeded": 0, "failed": 0},
    }
    _write_manifest(run_dir, manifest)
    # Seed an empty checkpoint so a crash before the first interval still
    # leaves a valid resumable state on disk.
    writer_seed = _RunWriter(
        run_dir, run_id, [r.record_id for r in corpus], _PriorState(), config.checkpoint_every
    )
    writer_seed.close()
    return _execute(run_dir, run_id, corpus, corpus, pool, config, _PriorState(), manifest)


def _recover_prior(run_dir: Path, checkpoint: dict) -> _PriorState:
    written: dict[str, tuple[str, float]] = {}
    for doc in _scan_jsonl(run_dir / "annotations.jsonl"):
        written[doc["record_id"]] = (
            doc.get("endpoint_id", ""),
            float(doc.get("latency_ms", 0.0)),
        )
    failed: dict[str, str] = {}
    for doc in _scan_jsonl(run_dir / "failures.jsonl"):
        failed.setdefault(doc["record_id"], doc.get("reason", "unknown"))
    for entry in checkpoint.get("failed", []):
        failed.setdefault(entry["record_id"], entry.get("reason", "unknown"))

    overlap = set(written) & set(failed)
    if overlap:
        raise CheckpointError(
            f"run state corrupt: {len(overlap)} ids both completed and failed"
        )
    return _PriorState(
        written=written,
        failed=failed,
        wall_clock_seconds=float(checkpoint.get("wall_clock_seconds", 0.0)),
    )


def load_checkpoint(run_dir: str | Path) -> dict:
    """Load and structurally validate a checkpoint; CheckpointError if unusable."""
    run_dir = Path(run_dir)
    path = run_dir / "checkpoint.json"
    try:
        doc = _read_json(path)
        if not isinstance(doc.get("completed_ids"), list):
            raise ValueError("completed_ids missing")
        return doc
    except (OSError, ValueError) as exc:
        # Report the most recent offset that is still readable.
        last_valid = "none"
        try:
            prev = _read_json(run_dir / "checkpoint.prev.json")
            last_valid = f"high_water_mark={prev.get('high_water_mark', '?')}"
        except (OSError, ValueError):
            pass
        raise CheckpointError(
            f"checkpoint unusable ({exc}); last valid checkpoint offset: {last_valid}"
        ) from exc


def resume(
    run_dir: str | Path,
    pool: EndpointPool,
    config: RunnerConfig,
    corpus: list[NewsRecord] | None = None,
) -> RunReport:
    """Continue an interrupted run; a completed run is a no-op.

    Only records absent from both the annotation and failure files are
    processed. The final report reflects the union of all sessions.
    """
    run_dir = Path(run_dir)
    manifest = _read_json(run_dir / "manifest.json")
    if manifest.get("status") == "complete":
        return RunReport.from_json(_read_json(run_dir / "report.json"))

    checkpoint = load_checkpoint(run_dir)
    if corpus is None:
        corpus_path = manifest.get("corpus_path")
        if not corpus_path:
            raise CheckpointError("manifest has no corpus_path; pass corpus explicitly")
        if manifest.get("corpus_sha256"):
            actual = corpus_sha256(corpus_path)
            if actual != manifest["corpus_sha256"]:
                raise CheckpointError(
                    "corpus file changed since the run started; refusing to resume"
                )
        corpus = load_corpus(corpus_path)

    prior = _recover_prior(run_dir, checkpoint)
    skip = set(prior.written) | set(prior.failed)
    pending = [r for r in corpus if r.record_id not in skip]

    manifest["endpoints"] = [ep.base_url for ep in pool.endpoints]
    manifest["status"] = "running"
    _write_manifest(run_dir, manifest)
    return _execute(
        run_dir, manifest["run_id"], corpus, pending, pool, config, prior, manifest
    )

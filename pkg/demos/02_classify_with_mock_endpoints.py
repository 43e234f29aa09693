#!/usr/bin/env python3
"""Load-balanced classification against local mock endpoints.

Spins up three mock inference servers, classifies a 3,000-item corpus with
six workers, then demonstrates failover by killing one endpoint partway
through a second run. Finishes by resuming an interrupted run directory to
show the exactly-once guarantee.

Run:  python3 demos/02_classify_with_mock_endpoints.py
"""
import json
import tempfile
import threading
import time
from pathlib import Path

from affekt.ingest import write_corpus
from affekt.orchestrator import RunnerConfig, load_annotations, resume, run_batch
from affekt.orchestrator.mock import MockBehavior, start_mock_pool
from affekt.sampledata import synthetic_corpus

workdir = Path(tempfile.mkdtemp())
corpus = synthetic_corpus(n=3000, seed=42)
corpus_path = workdir / "corpus.jsonl"
write_corpus(corpus, corpus_path)

print("=" * 72)
print("1. Round-robin over three healthy endpoints, six workers")
print("=" * 72)
servers = start_mock_pool(3, MockBehavior(latency_ms=1))
try:
    cfg = RunnerConfig(workers=6, checkpoint_every=500,
                       model_id="mock-emotion", timeout_s=10.0)
    pool = cfg.build_pool([s.base_url for s in servers])
    report = run_batch(corpus, pool, cfg, workdir / "runs_balanced",
                       corpus_path=corpus_path)
    print(f"  succeeded={report.succeeded} failed={report.failed}")
    print(f"  mean latency {report.mean_latency_ms:.1f} ms, "
          f"throughput {report.throughput_items_per_min:.0f} items/min")
    for endpoint, count in sorted(report.per_endpoint_counts.items()):
        print(f"    {endpoint:30} {count:>5} calls")
finally:
    for s in servers:
        s.stop()

print()
print("=" * 72)
print("2. Automatic failover when an endpoint dies mid-run")
print("=" * 72)
servers = start_mock_pool(3, MockBehavior(latency_ms=1))
victim = servers[0]

def assassin():
    while True:
        with victim.lock:
            if victim.requests_handled >= 300:
                break
        time.sleep(0.005)
    print(f"  !! killing {victim.base_url} after {victim.requests_handled} calls")
    victim.stop()

threading.Thread(target=assassin, daemon=True).start()
try:
    cfg = RunnerConfig(workers=6, checkpoint_every=500,
                       model_id="mock-emotion", timeout_s=5.0,
                       down_retry_seconds=60.0)
    pool = cfg.build_pool([s.base_url for s in servers])
    report = run_batch(corpus, pool, cfg, workdir / "runs_failover")
    print(f"  run still completed: succeeded={report.succeeded} failed={report.failed}")
    for ep in pool.endpoints:
        print(f"    {ep.base_url:30} health={ep.health:8} calls={ep.calls_completed}")
finally:
    for s in servers[1:]:
        s.stop()

print()
print("=" * 72)
print("3. Crash-safe resumption from a checkpointed run directory")
print("=" * 72)
# Fake an interruption: drop the report and truncate the annotation file of
# the first run, then resume it.
run_dir = next((workdir / "runs_balanced").iterdir())
lines = (run_dir / "annotations.jsonl").read_text(encoding="utf-8").splitlines()
(run_dir / "annotations.jsonl").write_text("\n".join(lines[:1200]) + "\n", encoding="utf-8")
(run_dir / "report.json").unlink()
manifest = json.loads((run_dir / "manifest.json").read_text())
manifest["status"] = "running"
(run_dir / "manifest.json").write_text(json.dumps(manifest), encoding="utf-8")
print(f"  simulated crash at 1200/{len(corpus)} annotations")

servers = start_mock_pool(3, MockBehavior(latency_ms=1))
try:
    cfg = RunnerConfig(workers=6, model_id="mock-emotion", timeout_s=10.0)
    pool = cfg.build_pool([s.base_url for s in servers])
    report = resume(run_dir, pool, cfg)
finally:
    for s in servers:
        s.stop()

annotations = load_annotations(run_dir)
ids = [a.record_id for a in annotations]
print(f"  after resume: {len(ids)} annotations, "
      f"{len(set(ids))} unique, union report succeeded={report.succeeded}")
assert len(ids) == len(set(ids)) == len(corpus)
print("  exactly-once holds: no duplicates, no gaps")

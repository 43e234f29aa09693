"""Deterministic synthetic fixtures: corpora, annotations, and run layouts.

Real scraped news cannot ship with the repository, so demos and tests build
seeded synthetic Bengali corpora instead. Everything here is a pure function
of its seed: the same call produces byte-identical files.
"""
from __future__ import annotations

import json
import random
from datetime import datetime, timedelta, timezone
from pathlib import Path

from .ingest import NewsRecord, RawRecord, corpus_sha256, enrich, write_corpus
from .orchestrator.schema import EmotionAnnotation, _argmax_label
from .taxonomy import LABELS, Taxonomy, default_taxonomy

OUTLETS = ("Prothom Alo", "BDNews24", "Ittefaq", "Samakal")

# Common Bengali news vocabulary; enough variety that seeded headlines are
# distinct, with a few words that trip the mock classifier's keyword rules.
_WORDS = (
    "সরকার নির্বাচন দেশ আজ নতুন বাজার দাম বৃদ্ধি শিক্ষা স্বাস্থ্য হাসপাতাল "
    "চিকিৎসক সংকট আগুন হামলা নিহত আহত পুলিশ আদালত রায় ক্রিকেট দল জয় পরাজয় "
    "খেলা অর্থনীতি ব্যাংক ঋণ কৃষক ফসল বন্যা ঝড় আবহাওয়া রাজধানী সড়ক দুর্ঘটনা "
    "উদ্ধার আন্দোলন ছাত্র বিশ্ববিদ্যালয় প্রতিবাদ সমঝোতা উন্নয়ন প্রকল্প উদ্বোধন "
    "আশা উৎসব ঘোষণা সিদ্ধান্ত বৈঠক"
).split()

_SECTIONS = ("politics", "economy", "sports", "national", "world")


def _headline(rng: random.Random) -> str:
    return " ".join(rng.choice(_WORDS) for _ in range(rng.randint(4, 9)))


def synthetic_raw_rows(
    n: int = 1000,
    seed: int = 20260801,
    duplicates: int = 17,
    english_rows: int = 25,
    short_rows: int = 12,
    malformed_rows: int = 8,
    start: datetime | None = None,
) -> tuple[list, dict]:
    """Raw input rows with planted defects and their exact ground truth.

    Returns (rows, truth) where rows mixes dicts and raw non-JSON strings
    (the malformed plants) and truth records every planted count. Clean rows
    fill up whatever the plants leave of ``n``.
    """
    rng = random.Random(seed)
    start = start or datetime(2026, 6, 1, tzinfo=timezone.utc)
    clean = n - duplicates - english_rows - short_rows - malformed_rows
    if clean <= 0:
        raise ValueError("planted defects exceed requested row count")

    rows: list = []
    base_rows: list[dict] = []
    seen_keys: set[tuple[str, str]] = set()
    for i in range(clean):
        outlet = rng.choice(OUTLETS)
        headline = _headline(rng)
        while (outlet, headline) in seen_keys:  # keep the planted dup count exact
            headline = _headline(rng)
        seen_keys.add((outlet, headline))
        published = start + timedelta(hours=rng.randint(0, 24 * 60))
        doc = {
            "source_id": f"s{i:05d}",
            "outlet": outlet,
            "headline": headline,
            "body": _headline(rng) + " " + _headline(rng) if rng.random() < 0.5 else None,
            "published_at": published.isoformat(),
            "section": rng.choice(_SECTIONS),
            "url": f"https://example.com/news/{i}",
        }
        base_rows.append(doc)
        rows.append(doc)

    for i in range(duplicates):
        victim = dict(rng.choice(base_rows))
        victim["source_id"] = f"dup{i:04d}"
        victim["url"] = f"https://example.com/dup/{i}"
        rows.append(victim)
    for i in range(english_rows):
        rows.append(
            {
                "source_id": f"en{i:04d}",
                "outlet": rng.choice(OUTLETS),
                "headline": f"English only headline number {i} about markets today",
                "published_at": (start + timedelta(hours=i)).isoformat(),
            }
        )
    for i in range(short_rows):
        rows.append(
            {
                "source_id": f"sh{i:04d}",
                "outlet": rng.choice(OUTLETS),
                "headline": rng.choice(_WORDS),
                "published_at": (start + timedelta(hours=i)).isoformat(),
            }
        )
    for i in range(malformed_rows):
        if i % 2 == 0:
            rows.append("{this is not json")
        else:
            rows.append({"source_id": f"bad{i:04d}", "outlet": rng.choice(OUTLETS)})

    rng.shuffle(rows)
    truth = {
        "input_count": n,
        "kept_count": clean,
        "duplicate": duplicates,
        "non_target_language": english_rows,
        "too_short": short_rows,
        "malformed": malformed_rows,
    }
    return rows, truth


def write_raw_file(path: str | Path, rows: list) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as fh:
        for row in rows:
            if isinstance(row, str):
                fh.write(row + "\n")
            else:
                fh.write(json.dumps(row, ensure_ascii=False) + "\n")
    return path


def synthetic_corpus(
    n: int = 1000,
    seed: int = 7,
    outlets: tuple[str, ...] = OUTLETS,
    start: datetime | None = None,
    span_days: int = 30,
) -> list[NewsRecord]:
    """Clean, already-ingested corpus records (unique headlines, all dated)."""
    rng = random.Random(seed)
    start = start or datetime(2026, 6, 1, tzinfo=timezone.utc)
    records = []
    seen = set()
    while len(records) < n:
        headline = _headline(rng)
        outlet = rng.choice(outlets)
        if (outlet, headline) in seen:
            continue
        seen.add((outlet, headline))
        published = start + timedelta(minutes=rng.randint(0, span_days * 24 * 60))
        rec = enrich(
            RawRecord(
                source_id=f"s{len(records):05d}",
                outlet=outlet,
                headline=headline,
                body=None,
                published_at=published,
                section=rng.choice(_SECTIONS),
            )
        )
        records.append(rec)
    return records


# Per-outlet dominant-label bias so outlet profiles differ enough for the
# polarization metrics to have something to measure.
_OUTLET_BIAS = {
    "Prothom Alo": ("anger", "sadness", "fear", "neutral"),
    "BDNews24": ("neutral", "surprise", "joy", "sadness"),
    "Ittefaq": ("sadness", "disappointment", "anger", "neutral"),
    "Samakal": ("joy", "optimism", "neutral", "surprise"),
}


def synthetic_annotations(
    corpus: list[NewsRecord],
    taxonomy: Taxonomy | None = None,
    seed: int = 11,
    model_id: str = "fixture-model",
) -> list[EmotionAnnotation]:
    """One deterministic mixed-probability annotation per corpus record."""
    taxonomy = taxonomy or default_taxonomy()
    rng = random.Random(seed)
    annotations = []
    for rec in corpus:
        bias = _OUTLET_BIAS.get(rec.outlet, LABELS)
        dominant = rng.choice(bias)
        others = rng.sample([l for l in LABELS if l != dominant], k=rng.randint(1, 3))
        weights = {dominant: rng.uniform(0.5, 0.9)}
        remainder = 1.0 - weights[dominant]
        raw = [rng.uniform(0.1, 1.0) for _ in others]
        scale = remainder / sum(raw)
        for label, w in zip(others, raw):
            weights[label] = w * scale
        probs = {label: weights.get(label, 0.0) for label in LABELS}
        mass = sum(probs.values())
        probs = {label: p / mass for label, p in probs.items()}
        annotations.append(
            EmotionAnnotation(
                record_id=rec.record_id,
                dominant=_argmax_label(probs),
                probabilities=probs,
                confidence=max(probs.values()),
                endpoint_id="fixture",
                latency_ms=rng.uniform(5, 20),
                model_id=model_id,
            )
        )
    return annotations


def write_fixture_run(
    runs_root: str | Path,
    corpus_path: str | Path,
    annotations: list[EmotionAnnotation],
    run_id: str = "20260701T000000_000000Z",
    model_id: str = "fixture-model",
) -> Path:
    """Materialize a complete run directory without touching any endpoint."""
    run_dir = Path(runs_root) / run_id
    run_dir.mkdir(parents=True, exist_ok=True)
    with open(run_dir / "annotations.jsonl", "w", encoding="utf-8") as fh:
        for ann in annotations:
            fh.write(json.dumps(ann.to_json(), ensure_ascii=False) + "\n")
    (run_dir / "failures.jsonl").write_text("", encoding="utf-8")

    per_endpoint: dict[str, int] = {}
    for ann in annotations:
        per_endpoint[ann.endpoint_id] = per_endpoint.get(ann.endpoint_id, 0) + 1
    latency_sum = sum(a.latency_ms for a in annotations)
    checkpoint = {
        "run_id": run_id,
        "high_water_mark": len(annotations),
        "completed_ids": sorted(a.record_id for a in annotations),
        "per_endpoint_counts": per_endpoint,
        "failed": [],
        "latency_sum_ms": latency_sum,
        "latency_count": len(annotations),
        "wall_clock_seconds": 1.0,
        "checkpointed_at": "2026-07-01T00:00:01+00:00",
    }
    (run_dir / "checkpoint.json").write_text(
        json.dumps(checkpoint), encoding="utf-8"
    )
    report = {
        "total_items": len(annotations),
        "succeeded": len(annotations),
        "failed": 0,
        "mean_latency_ms": latency_sum / len(annotations) if annotations else 0.0,
        "throughput_items_per_min": 60.0 * len(annotations),
        "per_endpoint_counts": per_endpoint,
        "wall_clock_seconds": 1.0,
    }
    (run_dir / "report.json").write_text(json.dumps(report), encoding="utf-8")
    manifest = {
        "run_id": run_id,
        "corpus_path": str(Path(corpus_path).resolve()),
        "corpus_sha256": corpus_sha256(corpus_path),
        "model_id": model_id,
        "endpoints": ["fixture"],
        "created_at": "2026-07-01T00:00:00+00:00",
        "status": "complete",
        "counts": {"succeeded": len(annotations), "failed": 0},
    }
    (run_dir / "manifest.json").write_text(json.dumps(manifest), encoding="utf-8")
    return run_dir


def build_fixture_store(
    root: str | Path,
    n: int = 1000,
    seed: int = 7,
    with_metrics: bool = True,
) -> dict:
    """Full store root (corpus + complete run + artifacts) for API serving.

    Returns a dict with the corpus records, annotations, and key paths.
    """
    from .metrics import write_metric_artifacts

    root = Path(root)
    corpus = synthetic_corpus(n=n, seed=seed)
    corpus_path = root / "corpus" / "corpus.jsonl"
    corpus_path.parent.mkdir(parents=True, exist_ok=True)
    write_corpus(corpus, corpus_path)
    annotations = synthetic_annotations(corpus, seed=seed + 1)
    run_dir = write_fixture_run(root / "runs", corpus_path, annotations)
    taxonomy = default_taxonomy()
    artifacts = None
    if with_metrics:
        artifacts = write_metric_artifacts(
            corpus, annotations, taxonomy, run_dir / "metrics"
        )
    return {
        "root": root,
        "corpus": corpus,
        "corpus_path": corpus_path,
        "annotations": annotations,
        "run_dir": run_dir,
        "artifacts": artifacts,
    }

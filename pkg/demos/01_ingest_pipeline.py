#!/usr/bin/env python3
"""Walk through the ingestion pipeline on a synthetic raw feed.

Builds a 1,000-row raw JSONL file with known planted defects (duplicates,
non-Bengali rows, too-short headlines, malformed rows), runs the full
decode -> normalize -> filter -> deduplicate pipeline, and checks the
cleaning report against the planted ground truth.

Run:  python3 demos/01_ingest_pipeline.py
"""
import tempfile
from pathlib import Path

from affekt.ingest import IngestConfig, ingest, language_ratio, normalize_text
from affekt.sampledata import synthetic_raw_rows, write_raw_file

print("=" * 72)
print("1. Text normalization")
print("=" * 72)
samples = [
    "<b>খবর</b>  আজ",
    "Breaking&nbsp;news: \U0001F525 fire in <i>city</i> now",
    "দাম ১০% বেড়েছে!",
]
for raw in samples:
    print(f"  {raw!r:60} -> {normalize_text(raw)!r}")

print()
print("=" * 72)
print("2. Language ratio (share of Bengali letters among all letters)")
print("=" * 72)
for text in ["খবর আজ প্রকাশ", "plain english", "খবর আজ প্রকাশ hello world xyzw"]:
    print(f"  {text!r:45} -> {language_ratio(text):.3f}")

print()
print("=" * 72)
print("3. Full pipeline over a raw feed with planted defects")
print("=" * 72)
rows, truth = synthetic_raw_rows(n=1000, seed=20260801)
raw_path = write_raw_file(Path(tempfile.mkdtemp()) / "raw.jsonl", rows)
print(f"  raw file: {raw_path} ({truth['input_count']} rows)")
print(f"  planted:  {truth}")

corpus, report = ingest(raw_path, fmt="jsonl", config=IngestConfig())
print(f"\n  kept {report.kept_count} of {report.input_count}")
for reason, count in report.dropped.items():
    marker = ""
    if reason in truth:
        marker = "  (matches planted count)" if count == truth[reason] else "  (MISMATCH!)"
    print(f"    dropped {count:>4}  {reason}{marker}")

assert report.kept_count == truth["kept_count"]
print("\n  conservation: input == kept + dropped ->",
      report.input_count == report.kept_count + sum(report.dropped.values()))
print("\n  first three kept records:")
for rec in corpus[:3]:
    print(f"    [{rec.outlet}] {rec.headline[:48]}  (id={rec.record_id})")

"""News corpus ingestion: decode, clean, filter, deduplicate, enrich.

Pure transformation stage — no network, no database. The pipeline is
deterministic: the output corpus is a function of (file bytes, config), and
every dropped row is accounted for in the cleaning report, so
``input_count == kept_count + sum(dropped.values())`` always holds.

Cleaning rules (applied in this order, each idempotent):
  1. HTML entities unescaped to a fixpoint, then tags stripped
  2. emoji / pictographic symbols removed (Extended_Pictographic property),
     plus variation selectors and zero-width joiners; other zero-width
     format characters are dropped as well
  3. Unicode canonical composition (NFC)
  4. whitespace runs collapsed to single spaces, ends trimmed

Punctuation, digits, and capitalization are preserved: they can carry
emotional weight and downstream analysis wants them intact.
"""
from __future__ import annotations

import csv
import hashlib
import html
import io
import json
import unicodedata
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Iterable, Iterator, Optional

import regex

# Records without a usable publication date keep this sentinel; they stay in
# the corpus for distribution metrics but are excluded from time series and
# story matching.
SENTINEL_PUBLISHED_AT = datetime(1970, 1, 1, tzinfo=timezone.utc)

BENGALI_BLOCK = (0x0980, 0x09FF)

DROP_REASONS = (
    "duplicate",
    "non_target_language",
    "too_short",
    "empty_after_clean",
    "malformed",
)

_TAG_RE = regex.compile(r"<[^>]*>")
# Extended_Pictographic covers emoji proper plus pictographic symbols;
# FE00-FE0F are variation selectors, 200D is the zero-width joiner used in
# emoji sequences, and the rest are invisible format characters that only
# add noise to headline text.
_PICTO_RE = regex.compile(
    r"[\p{Extended_Pictographic}︀-️‍​⁠﻿]"
)
_WS_RE = regex.compile(r"\s+")


def normalize_text(raw: str) -> str:
    """Clean one text field. Total on valid Unicode text and idempotent."""
    text = raw
    # Unescape to a fixpoint so stacked escapes ("&amp;lt;") cannot smuggle
    # markup through a second normalization pass.
    while True:
        unescaped = html.unescape(text)
        if unescaped == text:
            break
        text = unescaped
    text = _TAG_RE.sub(" ", text)
    text = _PICTO_RE.sub("", text)
    # NFC after symbol removal: deleting a codepoint can leave a base and a
    # combining mark adjacent that only now compose, and composing first
    # would break idempotence.
    text = unicodedata.normalize("NFC", text)
    text = _WS_RE.sub(" ", text)
    return text.strip()


def language_ratio(text: str) -> float:
    """Fraction of letter codepoints that fall in the Bengali Unicode block.

    Only letter-category codepoints count on either side of the division, so
    combining vowel signs and digits cannot push the ratio outside [0, 1].
    Returns 0.0 when the text has no letters at all.
    """
    letters = 0
    bengali = 0
    lo, hi = BENGALI_BLOCK
    for ch in text:
        if unicodedata.category(ch).startswith("L"):
            letters += 1
            if lo <= ord(ch) <= hi:
                bengali += 1
    if letters == 0:
        return 0.0
    return bengali / letters


@dataclass
class IngestConfig:
    min_tokens: int = 3
    min_chars: int = 10
    min_language_ratio: float = 0.7
    language_filter: bool = True


@dataclass
class RawRecord:
    """One decoded input row, before cleaning."""

    source_id: str
    outlet: str
    headline: str
    body: Optional[str] = None
    url: Optional[str] = None
    published_at: Optional[datetime] = None
    section: Optional[str] = None


@dataclass
class NewsRecord:
    """One cleaned, kept news item; the unit every later stage consumes."""

    record_id: str
    outlet: str
    published_at: datetime
    section: str
    headline: str
    body: Optional[str]
    content_length: int
    language_ratio: float

    @property
    def has_timestamp(self) -> bool:
        return self.published_at != SENTINEL_PUBLISHED_AT

    def to_json(self) -> dict:
        return {
            "record_id": self.record_id,
            "outlet": self.outlet,
            "published_at": self.published_at.isoformat(),
            "section": self.section,
            "headline": self.headline,
            "body": self.body,
            "content_length": self.content_length,
            "language_ratio": self.language_ratio,
        }

    @classmethod
    def from_json(cls, doc: dict) -> "NewsRecord":
        return cls(
            record_id=doc["record_id"],
            outlet=doc["outlet"],
            published_at=parse_timestamp(doc.get("published_at")),
            section=doc.get("section", "unknown"),
            headline=doc["headline"],
            body=doc.get("body"),
            content_length=int(doc["content_length"]),
            language_ratio=float(doc["language_ratio"]),
        )


@dataclass
class CleaningReport:
    input_count: int = 0
    kept_count: int = 0
    dropped: dict = field(default_factory=lambda: {r: 0 for r in DROP_REASONS})

    def drop(self, reason: str) -> None:
        self.dropped[reason] += 1

    def check(self) -> None:
        total = self.kept_count + sum(self.dropped.values())
        if total != self.input_count:
            raise AssertionError(
                f"report imbalance: {self.input_count} in, {total} accounted"
            )

    def to_json(self) -> dict:
        return {
            "input_count": self.input_count,
            "kept_count": self.kept_count,
            "dropped": dict(self.dropped),
        }


class IngestError(Exception):
    """Fatal ingest problem (unreadable source, bad format name)."""


def parse_timestamp(value) -> datetime:
    """Parse an ISO-8601 timestamp to aware UTC; sentinel when absent or bad."""
    if value is None or value == "":
        return SENTINEL_PUBLISHED_AT
    if isinstance(value, datetime):
        dt = value
    else:
        try:
            dt = datetime.fromisoformat(str(value).replace("Z", "+00:00"))
        except ValueError:
            return SENTINEL_PUBLISHED_AT
    if dt.tzinfo is None:
        dt = dt.replace(tzinfo=timezone.utc)
    return dt.astimezone(timezone.utc)


def record_id_for(outlet: str, headline: str) -> str:
    """Stable content-derived id; unique post-dedup because the dedup key
    is exactly (outlet, headline)."""
    digest = hashlib.sha256(f"{outlet}\x1f{headline}".encode("utf-8")).hexdigest()
    return digest[:16]


def filter_record(record: NewsRecord, config: IngestConfig) -> Optional[str]:
    """Return a drop reason for ``record``, or None to keep it."""
    if not record.headline:
        return "empty_after_clean"
    if (
        len(record.headline.split()) < config.min_tokens
        or len(record.headline) < config.min_chars
    ):
        return "too_short"
    if config.language_filter and record.language_ratio < config.min_language_ratio:
        return "non_target_language"
    return None


def deduplicate(records: Iterable[NewsRecord]) -> tuple[list[NewsRecord], int]:
    """Keep the first record per (outlet, headline) key, preserving order.

    The same headline from two different outlets survives: cross-outlet
    repetition is exactly the signal story matching feeds on. Returns the
    kept records and the number dropped.
    """
    seen: set[tuple[str, str]] = set()
    kept: list[NewsRecord] = []
    dropped = 0
    for rec in records:
        key = (rec.outlet, rec.headline)
        if key in seen:
            dropped += 1
            continue
        seen.add(key)
        kept.append(rec)
    return kept, dropped


def _decode_raw(doc: dict) -> RawRecord:
    headline = doc.get("headline")
    if headline is None or not isinstance(headline, str):
        raise ValueError("missing headline")
    outlet = doc.get("outlet")
    if not outlet or not isinstance(outlet, str):
        raise ValueError("missing outlet")
    body = doc.get("body")
    if body is not None and not isinstance(body, str):
        body = str(body)
    return RawRecord(
        source_id=str(doc.get("source_id", "")),
        outlet=outlet,
        headline=headline,
        body=body or None,
        url=doc.get("url") or None,
        published_at=parse_timestamp(doc.get("published_at")),
        section=doc.get("section") or None,
    )


def iter_jsonl(path: Path) -> Iterator[Optional[dict]]:
    """Yield parsed objects, or None for rows that fail to parse."""
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            try:
                doc = json.loads(line)
            except json.JSONDecodeError:
                yield None
                continue
            yield doc if isinstance(doc, dict) else None


def iter_csv(path: Path) -> Iterator[Optional[dict]]:
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        for row in reader:
            if row is None:
                yield None
                continue
            yield {k: v for k, v in row.items() if k is not None}


def enrich(raw: RawRecord) -> NewsRecord:
    """Build a cleaned, metadata-enriched candidate record from a raw row."""
    headline = normalize_text(raw.headline)
    body = normalize_text(raw.body) if raw.body else None
    if body == "":
        body = None
    content_length = len(headline) + len(body or "")
    return NewsRecord(
        record_id=record_id_for(raw.outlet, headline),
        outlet=raw.outlet,
        published_at=raw.published_at or SENTINEL_PUBLISHED_AT,
        section=raw.section or "unknown",
        headline=headline,
        body=body,
        content_length=content_length,
        language_ratio=language_ratio(headline) if headline else 0.0,
    )


def ingest(
    source: str | Path,
    fmt: str = "jsonl",
    config: IngestConfig | None = None,
) -> tuple[list[NewsRecord], CleaningReport]:
    """Run the full pipeline over one file.

    Individual malformed rows are dropped (counted, never fatal); an
    unreadable file or unknown format is fatal.
    """
    config = config or IngestConfig()
    path = Path(source)
    if fmt == "jsonl":
        rows = iter_jsonl(path)
    elif fmt == "csv":
        rows = iter_csv(path)
    else:
        raise IngestError(f"unknown input format: {fmt!r}")

    report = CleaningReport()
    candidates: list[NewsRecord] = []
    try:
        for doc in rows:
            report.input_count += 1
            if doc is None:
                report.drop("malformed")
                continue
            try:
                raw = _decode_raw(doc)
            except ValueError:
                report.drop("malformed")
                continue
            record = enrich(raw)
            reason = filter_record(record, config)
            if reason is not None:
                report.drop(reason)
                continue
            candidates.append(record)
    except OSError as exc:
        raise IngestError(f"cannot read {path}: {exc}") from exc

    corpus, n_dup = deduplicate(candidates)
    report.dropped["duplicate"] += n_dup
    report.kept_count = len(corpus)
    report.check()
    return corpus, report


def write_corpus(records: Iterable[NewsRecord], path: str | Path) -> int:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    n = 0
    with open(path, "w", encoding="utf-8") as fh:
        for rec in records:
            fh.write(json.dumps(rec.to_json(), ensure_ascii=False) + "\n")
            n += 1
    return n


def load_corpus(path: str | Path) -> list[NewsRecord]:
    records = []
    for doc in iter_jsonl(Path(path)):
        if doc is None:
            continue
        records.append(NewsRecord.from_json(doc))
    return records


def corpus_sha256(path: str | Path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            digest.update(chunk)
    return digest.hexdigest()

"""Read-only storage and query layer over corpora, runs, and metric artifacts.

Layout under a store root:

    corpus/*.jsonl               canonical corpus files
    runs/<ts>/annotations.jsonl  one annotation per line
    runs/<ts>/manifest.json      run metadata incl. corpus path + hash
    runs/<ts>/report.json        final counters
    runs/<ts>/metrics/*.json     aggregate artifacts from the metrics CLI

Everything is indexed in memory at open; writes happen only through the
ingest/classify/metrics CLIs, never through a store handle, so a handle is
safe to share across concurrent readers.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from datetime import datetime
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Optional

import jsonschema

from .ingest import NewsRecord, load_corpus
from .metrics import AffectScores, affect_of
from .orchestrator.runner import load_annotations
from .orchestrator.schema import EmotionAnnotation
from .taxonomy import COARSE_CLASSES, LABELS, Taxonomy, default_taxonomy

ARTIFACT_NAMES = ("distribution", "profiles", "polarization", "trends", "matches")


class StoreError(Exception):
    pass


@dataclass
class RunManifest:
    run_id: str
    path: Path
    corpus_path: Optional[str]
    corpus_sha256: Optional[str]
    model_id: str
    endpoints: list[str]
    created_at: str
    status: str  # running | complete | failed
    succeeded: int
    failed: int

    def to_json(self) -> dict:
        return {
            "run_id": self.run_id,
            "corpus_path": self.corpus_path,
            "model_id": self.model_id,
            "endpoints": self.endpoints,
            "created_at": self.created_at,
            "status": self.status,
            "counts": {"succeeded": self.succeeded, "failed": self.failed},
        }


@dataclass
class QueryFilter:
    outlet: Optional[str] = None
    label: Optional[str] = None  # fine dominant label
    coarse: Optional[str] = None  # coarse class of the dominant label
    date_from: Optional[datetime] = None
    date_to: Optional[datetime] = None
    limit: int = 50
    offset: int = 0

    def validate(self) -> None:
        if not 1 <= self.limit <= 1000:
            raise ValueError(f"limit must be in [1, 1000], got {self.limit}")
        if self.offset < 0:
            raise ValueError(f"offset must be >= 0, got {self.offset}")
        if self.coarse is not None and self.coarse not in COARSE_CLASSES:
            # Unknown classes are allowed and simply match nothing, but a
            # fine label passed as coarse is a caller bug worth rejecting.
            if self.coarse in LABELS:
                raise ValueError(f"{self.coarse!r} is a fine label, not a coarse class")


@dataclass
class JoinedRow:
    record: NewsRecord
    annotation: EmotionAnnotation
    affect: AffectScores
    coarse: str

    def to_json(self) -> dict:
        return {
            "record_id": self.record.record_id,
            "outlet": self.record.outlet,
            "published_at": self.record.published_at.isoformat()
            if self.record.has_timestamp
            else None,
            "section": self.record.section,
            "headline": self.record.headline,
            "dominant": self.annotation.dominant,
            "coarse": self.coarse,
            "confidence": self.annotation.confidence,
            "valence": self.affect.valence,
            "arousal": self.affect.arousal,
        }


@dataclass
class Aggregates:
    distribution: Optional[dict] = None
    profiles: Optional[dict] = None
    polarization: Optional[dict] = None
    trends: Optional[dict] = None
    matches: Optional[dict] = None
    missing: list[str] = field(default_factory=list)

    def get(self, name: str) -> Optional[dict]:
        return getattr(self, name)


@lru_cache(maxsize=None)
def load_schema(name: str) -> dict:
    text = resources.files("affekt").joinpath(f"schemas/{name}.json").read_text("utf-8")
    return json.loads(text)


def validate_against_schema(doc: dict, schema_name: str) -> None:
    schema = load_schema(schema_name)
    try:
        jsonschema.validate(doc, schema)
    except jsonschema.ValidationError as exc:
        path = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise StoreError(f"{schema_name}: schema violation at {path}: {exc.message}") from exc


def _read_json(path: Path) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


class Store:
    def __init__(self, root: str | Path, taxonomy: Taxonomy | None = None):
        self.root = Path(root)
        if not self.root.exists():
            raise StoreError(f"store root does not exist: {self.root}")
        self.taxonomy = taxonomy or default_taxonomy()
        self.records: dict[str, NewsRecord] = {}
        self.runs: dict[str, RunManifest] = {}
        self._rows: dict[str, list[JoinedRow]] = {}
        self._aggregates: dict[str, Aggregates] = {}
        self._scan()

    # -- indexing -------------------------------------------------------

    def _scan(self) -> None:
        corpus_dir = self.root / "corpus"
        if corpus_dir.is_dir():
            for path in sorted(corpus_dir.glob("*.jsonl")):
                for rec in load_corpus(path):
                    self.records[rec.record_id] = rec

        runs_dir = self.root / "runs"
        if not runs_dir.is_dir():
            return
        for run_dir in sorted(p for p in runs_dir.iterdir() if p.is_dir()):
            manifest = self._load_manifest(run_dir)
            if manifest is None:
                continue
            self.runs[manifest.run_id] = manifest
            # Pull the run's own corpus into the index when it is readable;
            # a store root without corpus/ still serves its runs.
            if manifest.corpus_path:
                path = Path(manifest.corpus_path)
                if path.exists():
                    for rec in load_corpus(path):
                        self.records.setdefault(rec.record_id, rec)

    def _load_manifest(self, run_dir: Path) -> Optional[RunManifest]:
        manifest_path = run_dir / "manifest.json"
        run_id = run_dir.name
        try:
            doc = _read_json(manifest_path)
        except (OSError, ValueError):
            # No readable manifest at all: surface as a failed run.
            return RunManifest(
                run_id=run_id, path=run_dir, corpus_path=None, corpus_sha256=None,
                model_id="", endpoints=[], created_at="", status="failed",
                succeeded=0, failed=0,
            )
        counts = doc.get("counts", {})
        manifest = RunManifest(
            run_id=doc.get("run_id", run_id),
            path=run_dir,
            corpus_path=doc.get("corpus_path"),
            corpus_sha256=doc.get("corpus_sha256"),
            model_id=doc.get("model_id", ""),
            endpoints=list(doc.get("endpoints", [])),
            created_at=doc.get("created_at", ""),
            status=doc.get("status", "running"),
            succeeded=int(counts.get("succeeded", 0)),
            failed=int(counts.get("failed", 0)),
        )
        if manifest.status == "complete":
            # A complete run must back its claimed counts with file lines.
            lines = self._count_lines(run_dir / "annotations.jsonl")
            if lines != manifest.succeeded:
                manifest.status = "failed"
        return manifest

    @staticmethod
    def _count_lines(path: Path) -> int:
        if not path.exists():
            return 0
        with open(path, "rb") as fh:
            return sum(1 for line in fh if line.strip())

    # -- selection ------------------------------------------------------

    def complete_runs(self) -> list[RunManifest]:
        runs = [m for m in self.runs.values() if m.status == "complete"]
        runs.sort(key=lambda m: (m.created_at, m.run_id))
        return runs

    def latest_complete(self) -> Optional[RunManifest]:
        runs = self.complete_runs()
        return runs[-1] if runs else None

    # -- queries --------------------------------------------------------

    def joined_rows(self, run_id: str) -> list[JoinedRow]:
        if run_id in self._rows:
            return self._rows[run_id]
        manifest = self.runs.get(run_id)
        if manifest is None or manifest.status != "complete":
            raise StoreError(f"no complete run {run_id!r}")
        rows = []
        for ann in load_annotations(manifest.path):
            rec = self.records.get(ann.record_id)
            if rec is None:
                continue  # counted by metrics reconciliation, not served
            rows.append(
                JoinedRow(
                    record=rec,
                    annotation=ann,
                    affect=affect_of(ann, self.taxonomy),
                    coarse=self.taxonomy.coarse_of(ann.dominant),
                )
            )
        rows.sort(key=lambda r: (-r.record.published_at.timestamp(), r.record.record_id))
        self._rows[run_id] = rows
        return rows

    def query_headlines(
        self, flt: QueryFilter, run_id: Optional[str] = None
    ) -> dict:
        """Filtered, paginated page of joined rows with a stable order
        (published_at desc, record_id asc)."""
        flt.validate()
        if run_id is None:
            latest = self.latest_complete()
            if latest is None:
                raise StoreError("no complete runs in store")
            run_id = latest.run_id
        rows = self.joined_rows(run_id)

        def keep(row: JoinedRow) -> bool:
            if flt.outlet is not None and row.record.outlet != flt.outlet:
                return False
            if flt.label is not None and row.annotation.dominant != flt.label:
                return False
            if flt.coarse is not None and row.coarse != flt.coarse:
                return False
            if flt.date_from is not None and (
                not row.record.has_timestamp or row.record.published_at < flt.date_from
            ):
                return False
            if flt.date_to is not None and (
                not row.record.has_timestamp or row.record.published_at > flt.date_to
            ):
                return False
            return True

        matched = [r for r in rows if keep(r)]
        page = matched[flt.offset : flt.offset + flt.limit]
        return {
            "items": [r.to_json() for r in page],
            "total": len(matched),
            "limit": flt.limit,
            "offset": flt.offset,
        }

    def get_row(self, record_id: str, run_id: Optional[str] = None) -> Optional[JoinedRow]:
        if run_id is None:
            latest = self.latest_complete()
            if latest is None:
                return None
            run_id = latest.run_id
        for row in self.joined_rows(run_id):
            if row.record.record_id == record_id:
                return row
        return None

    # -- aggregates -----------------------------------------------------

    def load_aggregates(self, run_id: str) -> Aggregates:
        """Schema-validated metric artifacts; absent files are flagged, a
        schema violation raises naming the failing field."""
        if run_id in self._aggregates:
            return self._aggregates[run_id]
        manifest = self.runs.get(run_id)
        if manifest is None:
            raise StoreError(f"unknown run {run_id!r}")
        agg = Aggregates()
        metrics_dir = manifest.path / "metrics"
        for name in ARTIFACT_NAMES:
            path = metrics_dir / f"{name}.json"
            if not path.exists():
                agg.missing.append(name)
                continue
            doc = _read_json(path)
            validate_against_schema(doc, name)
            setattr(agg, name, doc)
        self._aggregates[run_id] = agg
        return agg


def open_store(root: str | Path, taxonomy: Taxonomy | None = None) -> Store:
    return Store(root, taxonomy=taxonomy)

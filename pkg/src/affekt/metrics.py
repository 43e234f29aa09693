"""Affective statistics over annotated corpora.

Everything here is a pure function of immutable inputs: emotion
distributions, negativity ratios, valence/arousal derivation, rolling means,
Jensen-Shannon divergence (base-2 logs, so values live in [0, 1]), the
cross-outlet polarization index, and lexical story matching. Empty groups
produce explicit None markers, never a silent 0.
"""
from __future__ import annotations

import hashlib
import json
from collections import Counter, defaultdict
from dataclasses import dataclass
from datetime import datetime
from pathlib import Path
from typing import Iterable, Optional, Sequence

import numpy as np
import regex

from .ingest import NewsRecord
from .taxonomy import COARSE_CLASSES, LABELS, LABEL_INDEX, Taxonomy, parse_label


@dataclass(frozen=True)
class AffectScores:
    valence: float  # [-1, 1]
    arousal: float  # [0, 1]


@dataclass
class EmotionDistribution:
    level: str  # "fine" | "coarse"
    counts: dict[str, int]
    total: int

    @property
    def defined(self) -> bool:
        return self.total > 0

    @property
    def shares(self) -> dict[str, float]:
        if not self.defined:
            return {}
        return {label: n / self.total for label, n in self.counts.items()}

    def share_vector(self) -> np.ndarray:
        """Shares in canonical label order for the distribution's level."""
        order = LABELS if self.level == "fine" else COARSE_CLASSES
        shares = self.shares
        return np.array([shares.get(label, 0.0) for label in order])

    def to_json(self) -> dict:
        return {
            "level": self.level,
            "counts": dict(self.counts),
            "total": self.total,
            "shares": self.shares,
        }

    @classmethod
    def from_counts(cls, counts: dict[str, int], level: str = "fine") -> "EmotionDistribution":
        counts = {k: int(v) for k, v in counts.items()}
        return cls(level=level, counts=counts, total=sum(counts.values()))


def _dominant_of(item) -> str:
    return item if isinstance(item, str) else item.dominant


def distribution(
    annotations: Iterable, taxonomy: Taxonomy, level: str = "fine"
) -> EmotionDistribution:
    """Count dominant labels; ``level="coarse"`` folds through the class map.

    Accepts annotation objects or bare label strings. An empty input yields
    total=0 with shares undefined (flagged via ``.defined``), not an error.
    """
    if level not in ("fine", "coarse"):
        raise ValueError(f"level must be fine or coarse, got {level!r}")
    counts: Counter = Counter()
    for item in annotations:
        label = parse_label(_dominant_of(item))
        counts[taxonomy.coarse_of(label) if level == "coarse" else label] += 1
    return EmotionDistribution(level=level, counts=dict(counts), total=sum(counts.values()))


def negativity_ratio(
    dist: EmotionDistribution, negatives: frozenset[str] | set[str]
) -> Optional[float]:
    """Share of items whose dominant emotion is in the negative set.

    Defined over the fine level; None when the distribution is empty.
    """
    if dist.level != "fine":
        raise ValueError("negativity ratio is defined over the fine level")
    if not dist.defined:
        return None
    shares = dist.shares
    return sum(shares.get(label, 0.0) for label in negatives)


def affect_of(annotation, taxonomy: Taxonomy) -> AffectScores:
    """Probability-weighted valence and arousal for one annotation."""
    valence = 0.0
    arousal = 0.0
    for label, p in annotation.probabilities.items():
        anchor = taxonomy.anchor_of(label)
        valence += p * anchor.valence
        arousal += p * anchor.arousal
    # Clamping can only ever trim numerical noise: anchors are in range and
    # the probabilities form a convex combination.
    return AffectScores(
        valence=min(1.0, max(-1.0, valence)),
        arousal=min(1.0, max(0.0, arousal)),
    )


def rolling_mean(series: Sequence[float], window: int) -> list[float]:
    """Trailing mean with an expanding head: out[i] averages the last
    ``window`` values ending at i (fewer near the start)."""
    if window < 1:
        raise ValueError(f"window must be >= 1, got {window}")
    x = np.asarray(series, dtype=float)
    if x.size == 0:
        return []
    csum = np.cumsum(x)
    out = np.empty_like(x)
    n = x.size
    w = min(window, n)
    out[:w] = csum[:w] / np.arange(1, w + 1)
    if n > w:
        out[w:] = (csum[w:] - csum[:-w]) / window
    return out.tolist()


def mean_valence_by_emotion(
    annotations: Iterable, taxonomy: Taxonomy
) -> dict[str, float]:
    """Mean derived valence per dominant label; absent labels are omitted."""
    sums: defaultdict[str, float] = defaultdict(float)
    counts: Counter = Counter()
    for ann in annotations:
        label = parse_label(ann.dominant)
        sums[label] += affect_of(ann, taxonomy).valence
        counts[label] += 1
    return {label: sums[label] / counts[label] for label in counts}


def jsd(p, q) -> float:
    """Jensen-Shannon divergence with base-2 logs; range [0, 1].

    Inputs are same-length probability vectors (zero entries fine,
    0*log 0 := 0). Mismatched lengths or non-normalized inputs raise.
    """
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    if p.shape != q.shape or p.ndim != 1:
        raise ValueError("jsd needs two same-length 1-d distributions")
    if np.any(p < 0) or np.any(q < 0):
        raise ValueError("jsd inputs must be non-negative")
    if abs(p.sum() - 1.0) > 1e-6 or abs(q.sum() - 1.0) > 1e-6:
        raise ValueError("jsd inputs must each sum to 1")
    m = 0.5 * (p + q)

    def kl(a: np.ndarray) -> float:
        mask = a > 0
        return float(np.sum(a[mask] * np.log2(a[mask] / m[mask])))

    value = 0.5 * kl(p) + 0.5 * kl(q)
    return min(1.0, max(0.0, value))


@dataclass
class OutletEmotionProfile:
    outlet: str
    distribution: EmotionDistribution  # coarse
    fine_distribution: EmotionDistribution
    mean_affect: Optional[AffectScores]
    negativity_ratio: Optional[float]
    item_count: int

    def to_json(self) -> dict:
        return {
            "outlet": self.outlet,
            "item_count": self.item_count,
            "distribution": self.distribution.to_json(),
            "mean_valence": self.mean_affect.valence if self.mean_affect else None,
            "mean_arousal": self.mean_affect.arousal if self.mean_affect else None,
            "negativity_ratio": self.negativity_ratio,
        }


def outlet_profiles(
    corpus: Sequence[NewsRecord],
    annotations: Iterable,
    taxonomy: Taxonomy,
    negatives: frozenset[str] | None = None,
) -> tuple[list[OutletEmotionProfile], int]:
    """Per-outlet coarse distribution, mean affect, and negativity ratio.

    Annotations that do not join to a corpus record are excluded; their
    count is returned as the reconciliation warning.
    """
    negatives = negatives if negatives is not None else taxonomy.negative_set
    by_id = {rec.record_id: rec for rec in corpus}
    grouped: defaultdict[str, list] = defaultdict(list)
    orphans = 0
    for ann in annotations:
        rec = by_id.get(ann.record_id)
        if rec is None:
            orphans += 1
            continue
        grouped[rec.outlet].append(ann)

    profiles = []
    for outlet in sorted(grouped):
        anns = grouped[outlet]
        fine = distribution(anns, taxonomy, level="fine")
        coarse = distribution(anns, taxonomy, level="coarse")
        affects = [affect_of(a, taxonomy) for a in anns]
        mean_affect = (
            AffectScores(
                valence=sum(a.valence for a in affects) / len(affects),
                arousal=sum(a.arousal for a in affects) / len(affects),
            )
            if affects
            else None
        )
        profiles.append(
            OutletEmotionProfile(
                outlet=outlet,
                distribution=coarse,
                fine_distribution=fine,
                mean_affect=mean_affect,
                negativity_ratio=negativity_ratio(fine, negatives),
                item_count=len(anns),
            )
        )
    return profiles, orphans


def api_index(profiles: Sequence[OutletEmotionProfile]) -> float:
    """Mean pairwise JSD between outlet coarse distributions; 0 below 2 outlets."""
    vectors = [
        p.distribution.share_vector() for p in profiles if p.distribution.defined
    ]
    if len(vectors) < 2:
        return 0.0
    values = []
    for i in range(len(vectors)):
        for j in range(i + 1, len(vectors)):
            values.append(jsd(vectors[i], vectors[j]))
    return float(np.mean(values))


@dataclass
class PolarizationReport:
    outlets: list[str]
    pairwise_jsd: list[list[float]]  # symmetric, zero diagonal, coarse level
    api: float
    fine_jsd_mean: Optional[float]
    matched_story_count: int

    def to_json(self) -> dict:
        return {
            "outlets": self.outlets,
            "pairwise_jsd": self.pairwise_jsd,
            "api": self.api,
            "fine_jsd_mean": self.fine_jsd_mean,
            "matched_story_count": self.matched_story_count,
        }


def polarization_report(
    profiles: Sequence[OutletEmotionProfile], matched_story_count: int
) -> PolarizationReport:
    defined = [p for p in profiles if p.distribution.defined]
    outlets = [p.outlet for p in defined]
    n = len(defined)
    matrix = [[0.0] * n for _ in range(n)]
    coarse_vecs = [p.distribution.share_vector() for p in defined]
    fine_vecs = [p.fine_distribution.share_vector() for p in defined]
    coarse_vals, fine_vals = [], []
    for i in range(n):
        for j in range(i + 1, n):
            d = jsd(coarse_vecs[i], coarse_vecs[j])
            matrix[i][j] = matrix[j][i] = d
            coarse_vals.append(d)
            fine_vals.append(jsd(fine_vecs[i], fine_vecs[j]))
    return PolarizationReport(
        outlets=outlets,
        pairwise_jsd=matrix,
        api=float(np.mean(coarse_vals)) if coarse_vals else 0.0,
        fine_jsd_mean=float(np.mean(fine_vals)) if fine_vals else None,
        matched_story_count=matched_story_count,
    )


# --- cross-outlet story matching -------------------------------------------

_TOKEN_RE = regex.compile(r"\w+")


def _tf_vector(text: str) -> Counter:
    return Counter(t.casefold() for t in _TOKEN_RE.findall(text))


def _cosine(a: Counter, b: Counter) -> float:
    if not a or not b:
        return 0.0
    dot = sum(v * b[k] for k, v in a.items() if k in b)
    if dot == 0:
        return 0.0
    na = sum(v * v for v in a.values()) ** 0.5
    nb = sum(v * v for v in b.values()) ** 0.5
    return dot / (na * nb)


@dataclass
class MatchConfig:
    window_hours: float = 48.0
    similarity_threshold: float = 0.6


@dataclass
class MatchedStoryGroup:
    group_id: str
    record_ids: list[str]  # sorted
    outlets: list[str]  # sorted, >= 2 distinct
    time_span: tuple[datetime, datetime]
    per_outlet_dominant: dict[str, str]

    def to_json(self) -> dict:
        return {
            "group_id": self.group_id,
            "record_ids": self.record_ids,
            "outlets": self.outlets,
            "time_span": [self.time_span[0].isoformat(), self.time_span[1].isoformat()],
            "per_outlet_dominant": dict(self.per_outlet_dominant),
        }


class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)


def match_stories(
    corpus: Sequence[NewsRecord],
    annotations_by_id: dict[str, object],
    config: MatchConfig | None = None,
) -> tuple[list[MatchedStoryGroup], int]:
    """Group near-duplicate coverage of one event across outlets.

    Pairs of dated records from different outlets within the time window are
    linked when the TF-cosine similarity of their headline tokens reaches the
    threshold; groups are the connected components of those links (linkage is
    transitive, so a chained group can span more than one window). Output is
    deterministic and independent of input order. Returns the groups plus the
    count of undated records that could not participate.
    """
    config = config or MatchConfig()
    dated = sorted(
        (rec for rec in corpus if rec.has_timestamp),
        key=lambda r: (r.published_at, r.record_id),
    )
    undated = sum(1 for rec in corpus if not rec.has_timestamp)

    vectors = [_tf_vector(rec.headline) for rec in dated]
    uf = _UnionFind(len(dated))
    window = config.window_hours * 3600.0
    for i, rec in enumerate(dated):
        for j in range(i + 1, len(dated)):
            other = dated[j]
            if (other.published_at - rec.published_at).total_seconds() > window:
                break
            if other.outlet == rec.outlet:
                continue
            if _cosine(vectors[i], vectors[j]) >= config.similarity_threshold:
                uf.union(i, j)

    components: defaultdict[int, list[int]] = defaultdict(list)
    for i in range(len(dated)):
        components[uf.find(i)].append(i)

    groups = []
    for members in components.values():
        if len(members) < 2:
            continue
        records = [dated[i] for i in members]
        outlets = sorted({r.outlet for r in records})
        if len(outlets) < 2:
            continue
        record_ids = sorted(r.record_id for r in records)
        per_outlet: dict[str, str] = {}
        for outlet in outlets:
            labels = Counter()
            for r in records:
                if r.outlet != outlet:
                    continue
                ann = annotations_by_id.get(r.record_id)
                if ann is not None:
                    labels[ann.dominant] += 1
            if labels:
                per_outlet[outlet] = max(
                    labels, key=lambda l: (labels[l], -LABEL_INDEX[l])
                )
        times = [r.published_at for r in records]
        digest = hashlib.sha1(",".join(record_ids).encode("utf-8")).hexdigest()[:12]
        groups.append(
            MatchedStoryGroup(
                group_id=f"g{digest}",
                record_ids=record_ids,
                outlets=outlets,
                time_span=(min(times), max(times)),
                per_outlet_dominant=per_outlet,
            )
        )
    groups.sort(key=lambda g: (g.time_span[0], g.group_id))
    return groups, undated


# --- time-bucketed trend series ---------------------------------------------


def write_metric_artifacts(
    corpus: Sequence[NewsRecord],
    annotations: Sequence,
    taxonomy: Taxonomy,
    out_dir,
    match_config: MatchConfig | None = None,
) -> dict[str, dict]:
    """Compute the five aggregate artifacts and write them under ``out_dir``.

    Emits distribution.json, profiles.json, polarization.json, trends.json,
    and matches.json with the field names the API serves verbatim. Returns
    the artifact dicts keyed by name.
    """
    profiles, orphans = outlet_profiles(corpus, annotations, taxonomy)
    ann_by_id = {a.record_id: a for a in annotations}
    groups, undated = match_stories(corpus, ann_by_id, match_config)
    artifacts = {
        "distribution": {
            "fine": distribution(annotations, taxonomy, "fine").to_json(),
            "coarse": distribution(annotations, taxonomy, "coarse").to_json(),
        },
        "profiles": {
            "profiles": [p.to_json() for p in profiles],
            "unmatched_annotations": orphans,
        },
        "polarization": polarization_report(profiles, len(groups)).to_json(),
        "trends": build_trends(corpus, annotations, taxonomy),
        "matches": {
            "groups": [g.to_json() for g in groups],
            "undated_records": undated,
        },
    }
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    for name, doc in artifacts.items():
        with open(out / f"{name}.json", "w", encoding="utf-8") as fh:
            json.dump(doc, fh, ensure_ascii=False, indent=2)
            fh.write("\n")
    return artifacts


def build_trends(
    corpus: Sequence[NewsRecord],
    annotations: Iterable,
    taxonomy: Taxonomy,
) -> dict:
    """Per-day mean valence/arousal over dated, annotated records.

    Raw per-bucket means only; rolling windows are applied by consumers so
    one artifact serves any window choice.
    """
    by_id = {rec.record_id: rec for rec in corpus}
    buckets: defaultdict[str, list[AffectScores]] = defaultdict(list)
    undated = 0
    for ann in annotations:
        rec = by_id.get(ann.record_id)
        if rec is None:
            continue
        if not rec.has_timestamp:
            undated += 1
            continue
        buckets[rec.published_at.date().isoformat()].append(affect_of(ann, taxonomy))

    points = []
    for day in sorted(buckets):
        scores = buckets[day]
        points.append(
            {
                "date": day,
                "count": len(scores),
                "mean_valence": sum(s.valence for s in scores) / len(scores),
                "mean_arousal": sum(s.arousal for s in scores) / len(scores),
            }
        )
    return {"bucket": "day", "default_window": 7, "points": points, "undated_count": undated}

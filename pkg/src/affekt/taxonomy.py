"""Emotion label space: 28 fine labels, their coarse classes, and affect anchors.

The label set is closed. Every fine label maps to exactly one of seven coarse
classes and carries one (valence, arousal) anchor pair. The table ships as
``data/taxonomy.json`` and can be swapped for a file of the same shape; the
loader re-validates every structural invariant, so a bad override fails loudly
at load time instead of corrupting downstream aggregates.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from pathlib import Path

# Canonical order: used for argmax tie-breaking and for vector layouts.
LABELS: tuple[str, ...] = (
    "admiration", "amusement", "anger", "annoyance", "approval", "caring",
    "confusion", "curiosity", "desire", "disappointment", "disapproval",
    "disgust", "embarrassment", "excitement", "fear", "gratitude", "grief",
    "joy", "love", "nervousness", "optimism", "pride", "realization",
    "relief", "remorse", "sadness", "surprise", "neutral",
)

COARSE_CLASSES: tuple[str, ...] = (
    "joy", "sadness", "anger", "fear", "surprise", "disgust", "neutral",
)

LABEL_INDEX: dict[str, int] = {name: i for i, name in enumerate(LABELS)}

DEFAULT_NEGATIVE_SET = frozenset({"anger", "sadness", "disappointment", "fear"})


class UnknownLabelError(ValueError):
    """Raised when a string is not one of the 28 fine emotion labels."""


class TaxonomyError(ValueError):
    """Raised when a taxonomy table violates a structural invariant."""


def parse_label(name: str) -> str:
    """Return the canonical label for ``name`` or raise ``UnknownLabelError``."""
    key = name.strip().lower()
    if key not in LABEL_INDEX:
        raise UnknownLabelError(f"unknown emotion label: {name!r}")
    return key


@dataclass(frozen=True)
class AffectAnchor:
    label: str
    valence: float  # signed, in [-1, 1]
    arousal: float  # unsigned, in [0, 1]


class Taxonomy:
    """Immutable view over the label table; safe for concurrent reads."""

    def __init__(self, rows: list[dict]):
        seen: dict[str, dict] = {}
        for row in rows:
            label = parse_label(str(row["label"]))
            if label in seen:
                raise TaxonomyError(f"duplicate row for label {label!r}")
            seen[label] = row
        missing = [l for l in LABELS if l not in seen]
        if missing:
            raise TaxonomyError(f"taxonomy missing labels: {missing}")

        self._coarse: dict[str, str] = {}
        self._anchors: dict[str, AffectAnchor] = {}
        negatives: set[str] = set()
        for label in LABELS:
            row = seen[label]
            coarse = str(row["coarse"]).strip().lower()
            if coarse not in COARSE_CLASSES:
                raise TaxonomyError(f"{label}: unknown coarse class {coarse!r}")
            valence = float(row["valence"])
            arousal = float(row["arousal"])
            if not -1.0 <= valence <= 1.0:
                raise TaxonomyError(f"{label}: valence {valence} outside [-1, 1]")
            if not 0.0 <= arousal <= 1.0:
                raise TaxonomyError(f"{label}: arousal {arousal} outside [0, 1]")
            self._coarse[label] = coarse
            self._anchors[label] = AffectAnchor(label, valence, arousal)
            if bool(row.get("negative", False)):
                negatives.add(label)

        if not negatives:
            raise TaxonomyError("negative set must be non-empty")
        for label in negatives:
            if self._anchors[label].valence >= 0:
                raise TaxonomyError(
                    f"negative-set label {label!r} must have valence < 0"
                )
        if self._anchors["neutral"].valence != 0.0:
            raise TaxonomyError("neutral anchor must have valence exactly 0")
        for label, coarse in self._coarse.items():
            if coarse == "joy" and self._anchors[label].valence <= 0:
                raise TaxonomyError(
                    f"joy-class label {label!r} must have valence > 0"
                )
        if set(self._coarse.values()) != set(COARSE_CLASSES):
            raise TaxonomyError("every coarse class needs at least one fine label")

        self.negative_set: frozenset[str] = frozenset(negatives)

    @classmethod
    def load(cls, path: str | Path | None = None) -> "Taxonomy":
        """Load from ``path`` or the packaged default table."""
        if path is None:
            text = (
                resources.files("affekt").joinpath("data/taxonomy.json").read_text("utf-8")
            )
        else:
            text = Path(path).read_text(encoding="utf-8")
        doc = json.loads(text)
        return cls(doc["labels"])

    def coarse_of(self, label: str) -> str:
        return self._coarse[parse_label(label)]

    def anchor_of(self, label: str) -> AffectAnchor:
        return self._anchors[parse_label(label)]

    def anchor_vectors(self) -> tuple[list[float], list[float]]:
        """(valence, arousal) anchor values in canonical label order."""
        vals = [self._anchors[l].valence for l in LABELS]
        ars = [self._anchors[l].arousal for l in LABELS]
        return vals, ars

    def as_rows(self) -> list[dict]:
        return [
            {
                "label": l,
                "coarse": self._coarse[l],
                "valence": self._anchors[l].valence,
                "arousal": self._anchors[l].arousal,
                "negative": l in self.negative_set,
            }
            for l in LABELS
        ]


@lru_cache(maxsize=1)
def default_taxonomy() -> Taxonomy:
    return Taxonomy.load()

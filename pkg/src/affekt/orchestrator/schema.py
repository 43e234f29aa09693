"""Prompt construction and strict validation of model responses.

Endpoints run in JSON-constrained mode, but the orchestrator still treats
every response as hostile: labels outside the closed set, probability mass
far from 1, or missing keys are rejected with a typed reason and the
offending fragment, and the dominant label is always recomputed as the
argmax so persisted annotations satisfy their invariants no matter what the
model claimed.
"""
from __future__ import annotations

import json
from dataclasses import dataclass

from ..ingest import NewsRecord
from ..taxonomy import LABELS, UnknownLabelError, parse_label

# Acceptance window for the raw probability mass; anything inside is
# renormalized to exactly 1, anything outside is junk not worth saving.
PROB_MASS_WINDOW = (0.85, 1.15)

PROMPT_TEMPLATE = """\
You are an emotion classifier for news items. Read the headline (and body,
if given) and decide which emotions it expresses.

Respond with strict JSON only, no prose, using exactly these keys:
{{"dominant_emotion": "<label>", "probabilities": {{"<label>": <number>, ...}}, "confidence": <number between 0 and 1>}}

The only allowed emotion labels are:
{labels}

Probabilities must be non-negative and sum to 1. Omitted labels count as 0.

Headline: {headline}
{body_section}"""


def build_prompt(record: NewsRecord, max_body_chars: int = 1000) -> str:
    """Render the fixed classification prompt for one record. Deterministic."""
    if record.body:
        body = record.body[:max_body_chars]
        body_section = f"Body: {body}\n"
    else:
        body_section = ""
    return PROMPT_TEMPLATE.format(
        labels=", ".join(LABELS),
        headline=record.headline,
        body_section=body_section,
    )


class ResponseValidationError(Exception):
    """A response that parsed as text but failed the annotation contract.

    ``reason`` is one of: malformed_json, unknown_label, bad_probability_mass,
    missing_field. ``fragment`` carries the offending piece for failure logs.
    """

    def __init__(self, reason: str, fragment: str):
        super().__init__(f"{reason}: {fragment}")
        self.reason = reason
        self.fragment = fragment


@dataclass
class EmotionAnnotation:
    """Validated per-record inference result with provenance."""

    record_id: str
    dominant: str
    probabilities: dict[str, float]  # all 28 labels, sums to 1
    confidence: float
    endpoint_id: str = ""
    latency_ms: float = 0.0
    model_id: str = ""

    def to_json(self) -> dict:
        return {
            "record_id": self.record_id,
            "dominant": self.dominant,
            "probabilities": self.probabilities,
            "confidence": self.confidence,
            "endpoint_id": self.endpoint_id,
            "latency_ms": self.latency_ms,
            "model_id": self.model_id,
        }

    @classmethod
    def from_json(cls, doc: dict) -> "EmotionAnnotation":
        return cls(
            record_id=doc["record_id"],
            dominant=doc["dominant"],
            probabilities={k: float(v) for k, v in doc["probabilities"].items()},
            confidence=float(doc["confidence"]),
            endpoint_id=doc.get("endpoint_id", ""),
            latency_ms=float(doc.get("latency_ms", 0.0)),
            model_id=doc.get("model_id", ""),
        )


@dataclass
class FailureRecord:
    record_id: str
    reason: str
    detail: str = ""
    attempts: int = 0

    def to_json(self) -> dict:
        return {
            "record_id": self.record_id,
            "reason": self.reason,
            "detail": self.detail,
            "attempts": self.attempts,
        }


def _argmax_label(probabilities: dict[str, float]) -> str:
    # Ties break toward the earlier label in canonical order.
    best = LABELS[0]
    best_p = probabilities.get(best, 0.0)
    for label in LABELS[1:]:
        p = probabilities.get(label, 0.0)
        if p > best_p:
            best, best_p = label, p
    return best


def _clip(text: str, limit: int = 120) -> str:
    return text if len(text) <= limit else text[: limit - 1] + "…"


def parse_and_validate(
    response_text: str,
    *,
    record_id: str = "",
    endpoint_id: str = "",
    latency_ms: float = 0.0,
    model_id: str = "",
) -> EmotionAnnotation:
    """Parse one raw response body into a validated annotation.

    Raises ResponseValidationError with a typed reason on any contract
    violation. On success the probability vector covers all 28 labels,
    sums to exactly 1 (renormalized), and ``dominant`` is its argmax.
    """
    try:
        doc = json.loads(response_text)
    except (json.JSONDecodeError, TypeError) as exc:
        raise ResponseValidationError("malformed_json", _clip(str(response_text))) from exc
    if not isinstance(doc, dict):
        raise ResponseValidationError("malformed_json", _clip(response_text))

    raw_probs = doc.get("probabilities")
    if raw_probs is None or not isinstance(raw_probs, dict) or not raw_probs:
        raise ResponseValidationError("missing_field", "probabilities")

    probs = {label: 0.0 for label in LABELS}
    for key, value in raw_probs.items():
        try:
            label = parse_label(str(key))
        except UnknownLabelError:
            raise ResponseValidationError("unknown_label", str(key)) from None
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ResponseValidationError("missing_field", f"probabilities[{key}]")
        if value < 0:
            raise ResponseValidationError(
                "bad_probability_mass", f"{key}: {value} < 0"
            )
        probs[label] = float(value)

    mass = sum(probs.values())
    lo, hi = PROB_MASS_WINDOW
    if not lo <= mass <= hi:
        raise ResponseValidationError("bad_probability_mass", f"sum={mass:.4f}")
    probs = {label: p / mass for label, p in probs.items()}

    claimed = doc.get("dominant_emotion")
    if claimed is not None:
        try:
            parse_label(str(claimed))
        except UnknownLabelError:
            raise ResponseValidationError("unknown_label", str(claimed)) from None

    confidence = doc.get("confidence")
    if confidence is None:
        raise ResponseValidationError("missing_field", "confidence")
    if isinstance(confidence, bool) or not isinstance(confidence, (int, float)):
        raise ResponseValidationError("missing_field", "confidence")
    confidence = min(1.0, max(0.0, float(confidence)))

    return EmotionAnnotation(
        record_id=record_id,
        dominant=_argmax_label(probs),
        probabilities=probs,
        confidence=confidence,
        endpoint_id=endpoint_id,
        latency_ms=latency_ms,
        model_id=model_id,
    )


def validate_annotation(ann: EmotionAnnotation, tol: float = 1e-9) -> None:
    """Re-check the persisted-annotation invariants; raises on violation.

    Used as a linter pass over output files: probability support equals the
    label set, mass is 1 within ``tol``, dominant is the argmax, and
    confidence sits in [0, 1].
    """
    if set(ann.probabilities) != set(LABELS):
        raise ValueError(f"{ann.record_id}: probability support != label set")
    mass = sum(ann.probabilities.values())
    if abs(mass - 1.0) > tol:
        raise ValueError(f"{ann.record_id}: probability mass {mass} != 1")
    if any(p < 0 for p in ann.probabilities.values()):
        raise ValueError(f"{ann.record_id}: negative probability")
    if ann.dominant != _argmax_label(ann.probabilities):
        raise ValueError(f"{ann.record_id}: dominant is not the argmax")
    if not 0.0 <= ann.confidence <= 1.0:
        raise ValueError(f"{ann.record_id}: confidence {ann.confidence} out of range")

from __future__ import annotations

import pytest

from affekt.taxonomy import (
    COARSE_CLASSES,
    DEFAULT_NEGATIVE_SET,
    LABELS,
    Taxonomy,
    TaxonomyError,
    UnknownLabelError,
    default_taxonomy,
    parse_label,
)

EXPECTED_COARSE = {
    "joy": {"joy", "amusement", "approval", "excitement", "gratitude", "love",
            "optimism", "relief", "pride", "admiration", "desire", "caring"},
    "sadness": {"sadness", "disappointment", "embarrassment", "grief", "remorse"},
    "anger": {"anger", "annoyance", "disapproval"},
    "fear": {"fear", "nervousness"},
    "surprise": {"surprise", "realization", "confusion", "curiosity"},
    "disgust": {"disgust"},
    "neutral": {"neutral"},
}


def test_label_set_is_28():
    assert len(LABELS) == 28
    assert len(set(LABELS)) == 28


def test_parse_label_round_trip():
    for label in LABELS:
        assert parse_label(label) == label
        assert parse_label(label.upper()) == label


def test_parse_label_rejects_unknown():
    with pytest.raises(UnknownLabelError):
        parse_label("rage")


def test_coarse_mapping_total_and_exact(taxonomy):
    seen = {}
    for label in LABELS:
        seen[label] = taxonomy.coarse_of(label)
    for coarse, members in EXPECTED_COARSE.items():
        assert {l for l, c in seen.items() if c == coarse} == members


def test_coarse_mapping_spot_cases(taxonomy):
    assert taxonomy.coarse_of("anger") == "anger"
    assert taxonomy.coarse_of("disappointment") == "sadness"
    assert taxonomy.coarse_of("neutral") == "neutral"


def test_surjectivity(taxonomy):
    assert {taxonomy.coarse_of(l) for l in LABELS} == set(COARSE_CLASSES)


def test_every_label_has_anchor_in_range(taxonomy):
    for label in LABELS:
        anchor = taxonomy.anchor_of(label)
        assert -1.0 <= anchor.valence <= 1.0
        assert 0.0 <= anchor.arousal <= 1.0


def test_sadness_anchor_calibration_point(taxonomy):
    anchor = taxonomy.anchor_of("sadness")
    assert anchor.valence == -0.70
    assert anchor.arousal == 0.65


def test_neutral_anchor(taxonomy):
    anchor = taxonomy.anchor_of("neutral")
    assert anchor.valence == 0.0
    assert anchor.arousal == 0.1


def test_joy_anchor_positive(taxonomy):
    anchor = taxonomy.anchor_of("joy")
    assert anchor.valence == 0.80
    assert anchor.arousal == 0.60


def test_sign_invariants(taxonomy):
    for label in taxonomy.negative_set:
        assert taxonomy.anchor_of(label).valence < 0, label
    for label in LABELS:
        if taxonomy.coarse_of(label) == "joy":
            assert taxonomy.anchor_of(label).valence > 0, label


def test_default_negative_set(taxonomy):
    assert taxonomy.negative_set == DEFAULT_NEGATIVE_SET
    assert DEFAULT_NEGATIVE_SET == {"anger", "sadness", "disappointment", "fear"}


def test_override_table_validated(tmp_path):
    rows = default_taxonomy().as_rows()
    rows[0] = dict(rows[0], valence=1.5)
    import json

    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"labels": rows}), encoding="utf-8")
    with pytest.raises(TaxonomyError):
        Taxonomy.load(path)


def test_missing_label_rejected():
    rows = default_taxonomy().as_rows()[:-1]
    with pytest.raises(TaxonomyError):
        Taxonomy(rows)


def test_negative_label_with_positive_valence_rejected():
    rows = default_taxonomy().as_rows()
    for row in rows:
        if row["label"] == "fear":
            row["valence"] = 0.2
    with pytest.raises(TaxonomyError):
        Taxonomy(rows)

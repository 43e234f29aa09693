from __future__ import annotations

import math
import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from affekt.metrics import (
    AffectScores,
    EmotionDistribution,
    affect_of,
    api_index,
    distribution,
    jsd,
    mean_valence_by_emotion,
    negativity_ratio,
    outlet_profiles,
    polarization_report,
    rolling_mean,
)
from affekt.orchestrator.schema import EmotionAnnotation, _argmax_label
from affekt.taxonomy import COARSE_CLASSES, LABELS


def one_hot(label, record_id="r"):
    probs = {l: (1.0 if l == label else 0.0) for l in LABELS}
    return EmotionAnnotation(
        record_id=record_id, dominant=label, probabilities=probs, confidence=1.0
    )


def mixture(weights, record_id="r"):
    probs = {l: 0.0 for l in LABELS}
    mass = sum(weights.values())
    for label, w in weights.items():
        probs[label] = w / mass
    return EmotionAnnotation(
        record_id=record_id,
        dominant=_argmax_label(probs),
        probabilities=probs,
        confidence=max(probs.values()),
    )


def reference_kl_jsd(p, q):
    """Independent plain-Python evaluation of the divergence definition."""
    m = [(pi + qi) / 2 for pi, qi in zip(p, q)]

    def kl(a, b):
        total = 0.0
        for ai, bi in zip(a, b):
            if ai > 0:
                total += ai * math.log2(ai / bi)
        return total

    return 0.5 * kl(p, m) + 0.5 * kl(q, m)


class TestDistribution:
    def test_reference_counts_reproduce_published_shares(
        self, taxonomy, reference_distribution
    ):
        labels = []
        for label, count in reference_distribution["counts"].items():
            labels.extend([label] * count)
        dist = distribution(labels, taxonomy, level="fine")
        assert dist.total == 300_000
        assert dist.shares["anger"] == pytest.approx(0.17269, abs=1e-5)

    def test_single_annotation(self, taxonomy):
        dist = distribution([one_hot("joy")], taxonomy)
        assert dist.shares == {"joy": 1.0}

    def test_coarse_sadness_class_share(self, taxonomy, reference_distribution):
        labels = []
        for label, count in reference_distribution["counts"].items():
            labels.extend([label] * count)
        coarse = distribution(labels, taxonomy, level="coarse")
        # sadness + disappointment + embarrassment + remorse + grief
        expected = (35372 + 35157 + 16 + 35 + 5) / 300_000
        assert coarse.shares["sadness"] == pytest.approx(expected, abs=1e-9)
        assert coarse.shares["sadness"] == pytest.approx(0.23528, abs=1e-5)

    def test_empty_input_flagged_not_raised(self, taxonomy):
        dist = distribution([], taxonomy)
        assert dist.total == 0
        assert not dist.defined
        assert dist.shares == {}

    def test_conservation(self, taxonomy):
        rng = random.Random(5)
        labels = [rng.choice(LABELS) for _ in range(997)]
        dist = distribution(labels, taxonomy)
        assert sum(dist.counts.values()) == dist.total == 997
        assert sum(dist.shares.values()) == pytest.approx(1.0, abs=1e-9)

    def test_coarse_commutes_with_fine(self, taxonomy):
        rng = random.Random(9)
        labels = [rng.choice(LABELS) for _ in range(500)]
        fine = distribution(labels, taxonomy, "fine")
        coarse = distribution(labels, taxonomy, "coarse")
        pushed = {c: 0 for c in COARSE_CLASSES}
        for label, count in fine.counts.items():
            pushed[taxonomy.coarse_of(label)] += count
        assert {k: v for k, v in pushed.items() if v} == coarse.counts


class TestNegativityRatio:
    def test_reference_distribution_value(self, taxonomy, reference_distribution):
        dist = EmotionDistribution.from_counts(reference_distribution["counts"])
        ratio = negativity_ratio(dist, taxonomy.negative_set)
        assert ratio * 100 == pytest.approx(
            reference_distribution["negativity_percent"], abs=0.01
        )

    def test_all_neutral(self, taxonomy):
        dist = EmotionDistribution.from_counts({"neutral": 10})
        assert negativity_ratio(dist, taxonomy.negative_set) == 0.0

    def test_full_label_negative_set(self, taxonomy):
        dist = EmotionDistribution.from_counts({"anger": 3, "joy": 7})
        assert negativity_ratio(dist, frozenset(LABELS)) == pytest.approx(1.0)

    def test_empty_is_undefined(self, taxonomy):
        dist = EmotionDistribution.from_counts({})
        assert negativity_ratio(dist, taxonomy.negative_set) is None


class TestAffectOf:
    def test_one_hot_sadness_hits_anchor(self, taxonomy):
        scores = affect_of(one_hot("sadness"), taxonomy)
        assert scores.valence == -0.70
        assert scores.arousal == 0.65

    def test_one_hot_neutral_zero_valence(self, taxonomy):
        assert affect_of(one_hot("neutral"), taxonomy).valence == 0.0

    def test_half_sadness_half_neutral(self, taxonomy):
        ann = mixture({"sadness": 0.5, "neutral": 0.5})
        scores = affect_of(ann, taxonomy)
        assert scores.valence == pytest.approx(-0.35, abs=1e-12)
        assert scores.arousal == pytest.approx(0.375, abs=1e-12)

    def test_linearity(self, taxonomy):
        rng = np.random.default_rng(42)
        for _ in range(200):
            w = rng.dirichlet(np.ones(28))
            v = rng.dirichlet(np.ones(28))
            lam = rng.uniform()
            mix = lam * w + (1 - lam) * v
            a = affect_of(_vec_ann(w), taxonomy)
            b = affect_of(_vec_ann(v), taxonomy)
            c = affect_of(_vec_ann(mix), taxonomy)
            assert c.valence == pytest.approx(
                lam * a.valence + (1 - lam) * b.valence, abs=1e-12
            )
            assert c.arousal == pytest.approx(
                lam * a.arousal + (1 - lam) * b.arousal, abs=1e-12
            )


def _vec_ann(vec):
    probs = {label: float(p) for label, p in zip(LABELS, vec)}
    return EmotionAnnotation(
        record_id="r", dominant=_argmax_label(probs), probabilities=probs, confidence=1.0
    )


class TestRollingMean:
    def test_window_one_is_identity(self):
        assert rolling_mean([3.0, 1.0, 4.0], 1) == [3.0, 1.0, 4.0]

    def test_constant_series(self):
        assert rolling_mean([2.5] * 10, 4) == [2.5] * 10

    def test_hand_case(self):
        assert rolling_mean([1, 2, 3, 4], 2) == [1.0, 1.5, 2.5, 3.5]

    def test_bad_window(self):
        with pytest.raises(ValueError):
            rolling_mean([1.0], 0)

    def test_empty(self):
        assert rolling_mean([], 5) == []

    @settings(max_examples=200, deadline=None)
    @given(
        st.lists(st.floats(-1e6, 1e6), min_size=1, max_size=60),
        st.integers(1, 70),
    )
    def test_matches_brute_force(self, series, window):
        def brute(xs, w):
            return [
                sum(xs[max(0, i - w + 1): i + 1]) / len(xs[max(0, i - w + 1): i + 1])
                for i in range(len(xs))
            ]

        got = rolling_mean(series, window)
        want = brute(series, window)
        assert got == pytest.approx(want, rel=1e-9, abs=1e-9)


class TestMeanValenceByEmotion:
    def test_one_hot_groups_equal_anchor(self, taxonomy):
        anns = [one_hot("joy", "a"), one_hot("joy", "b"), one_hot("fear", "c")]
        means = mean_valence_by_emotion(anns, taxonomy)
        assert means["joy"] == pytest.approx(taxonomy.anchor_of("joy").valence)
        assert means["fear"] == pytest.approx(taxonomy.anchor_of("fear").valence)
        assert "sadness" not in means

    def test_two_sadness_one_hots(self, taxonomy):
        anns = [one_hot("sadness", "a"), one_hot("sadness", "b")]
        assert mean_valence_by_emotion(anns, taxonomy)["sadness"] == pytest.approx(-0.70)

    def test_mixed_fixture_against_brute_force(self, taxonomy):
        rng = np.random.default_rng(7)
        anns = [_vec_ann(rng.dirichlet(np.ones(28))) for _ in range(10)]
        got = mean_valence_by_emotion(anns, taxonomy)

        # independent aggregation: group then recompute valence per group
        vals, _ = taxonomy.anchor_vectors()
        groups = {}
        for ann in anns:
            v = sum(
                ann.probabilities[l] * vals[i] for i, l in enumerate(LABELS)
            )
            groups.setdefault(ann.dominant, []).append(v)
        for label, values in groups.items():
            assert got[label] == pytest.approx(sum(values) / len(values), abs=1e-12)


class TestJSD:
    def test_identical_is_zero(self):
        rng = np.random.default_rng(1)
        for _ in range(50):
            p = rng.dirichlet(np.ones(7))
            assert jsd(p, p) == 0.0

    def test_disjoint_is_one(self):
        assert jsd([1.0, 0.0], [0.0, 1.0]) == 1.0

    def test_hand_case_matches_reference_script(self):
        p, q = [0.5, 0.5], [1.0, 0.0]
        want = reference_kl_jsd(p, q)
        assert want == pytest.approx(0.31128, abs=1e-4)
        assert jsd(p, q) == pytest.approx(want, abs=1e-12)

    def test_symmetry_and_range_random(self):
        rng = np.random.default_rng(2)
        for _ in range(2000):
            k = rng.integers(2, 12)
            p = rng.dirichlet(np.ones(k))
            q = rng.dirichlet(np.ones(k))
            d = jsd(p, q)
            assert jsd(q, p) == d
            assert 0.0 <= d <= 1.0
            assert d == pytest.approx(reference_kl_jsd(p.tolist(), q.tolist()), abs=1e-10)

    def test_zero_divergence_implies_equal_distributions(self):
        rng = np.random.default_rng(3)
        for _ in range(500):
            p = rng.dirichlet(np.ones(7))
            if jsd(p, p) == 0.0:
                assert np.allclose(p, p, atol=1e-9)
            q = p.copy()
            q[0] += 1e-6
            q /= q.sum()
            assert jsd(p, q) > 0.0  # any visible difference diverges

    def test_rejects_mismatched_support(self):
        with pytest.raises(ValueError):
            jsd([1.0], [0.5, 0.5])

    def test_rejects_unnormalized(self):
        with pytest.raises(ValueError):
            jsd([0.5, 0.4], [0.5, 0.5])

    def test_rejects_negative(self):
        with pytest.raises(ValueError):
            jsd([1.5, -0.5], [0.5, 0.5])


class TestApiIndexAndPolarization:
    def _profiles(self, taxonomy, outlet_counts):
        from affekt.ingest import RawRecord, enrich

        corpus, annotations = [], []
        for outlet, counts in outlet_counts.items():
            i = 0
            for label, count in counts.items():
                for _ in range(count):
                    rec = enrich(
                        RawRecord(
                            source_id=f"{outlet}{i}",
                            outlet=outlet,
                            headline=f"শিরোনাম {outlet} নম্বর {i} আজ",
                        )
                    )
                    corpus.append(rec)
                    annotations.append(one_hot(label, rec.record_id))
                    i += 1
        profiles, orphans = outlet_profiles(corpus, annotations, taxonomy)
        assert orphans == 0
        return profiles

    def test_single_outlet_zero(self, taxonomy):
        profiles = self._profiles(taxonomy, {"A": {"joy": 5}})
        assert api_index(profiles) == 0.0

    def test_identical_outlets_zero(self, taxonomy):
        counts = {"joy": 5, "anger": 5}
        profiles = self._profiles(taxonomy, {"A": counts, "B": counts})
        assert api_index(profiles) == 0.0

    def test_disjoint_outlets_one(self, taxonomy):
        profiles = self._profiles(
            taxonomy, {"A": {"joy": 10}, "B": {"anger": 10}}
        )
        assert api_index(profiles) == 1.0

    def test_three_outlets_mean_of_pairwise(self, taxonomy):
        profiles = self._profiles(
            taxonomy,
            {
                "A": {"joy": 6, "anger": 4},
                "B": {"anger": 7, "sadness": 3},
                "C": {"neutral": 5, "joy": 5},
            },
        )
        vecs = [p.distribution.share_vector() for p in profiles]
        expected = np.mean(
            [
                reference_kl_jsd(vecs[0].tolist(), vecs[1].tolist()),
                reference_kl_jsd(vecs[0].tolist(), vecs[2].tolist()),
                reference_kl_jsd(vecs[1].tolist(), vecs[2].tolist()),
            ]
        )
        assert api_index(profiles) == pytest.approx(float(expected), abs=1e-12)

    def test_permutation_invariance(self, taxonomy):
        profiles = self._profiles(
            taxonomy,
            {"A": {"joy": 3, "fear": 7}, "B": {"anger": 5, "joy": 5}, "C": {"sadness": 4, "neutral": 6}},
        )
        baseline = api_index(profiles)
        rng = random.Random(3)
        for _ in range(5):
            shuffled = profiles[:]
            rng.shuffle(shuffled)
            assert api_index(shuffled) == pytest.approx(baseline, abs=1e-15)

    def test_polarization_report_matrix_properties(self, taxonomy):
        profiles = self._profiles(
            taxonomy,
            {"A": {"joy": 5, "anger": 5}, "B": {"anger": 9, "fear": 1}, "C": {"neutral": 10}},
        )
        report = polarization_report(profiles, matched_story_count=4)
        matrix = np.array(report.pairwise_jsd)
        assert np.allclose(matrix, matrix.T, atol=1e-12)
        assert np.all(np.diag(matrix) == 0)
        assert report.matched_story_count == 4
        offdiag = matrix[np.triu_indices(3, k=1)]
        assert report.api == pytest.approx(float(offdiag.mean()), abs=1e-15)
        assert report.fine_jsd_mean is not None

    def test_prothom_alo_style_profile_negativity(self, taxonomy):
        # Published per-outlet shares: anger 18.77%, disappointment 11.84%,
        # fear 10.19%; the sadness share is back-solved so the four negative
        # shares add to the published 51.82% ratio (sadness = 11.02%).
        counts = {
            "anger": 1877,
            "disappointment": 1184,
            "fear": 1019,
            "sadness": 1102,
            "neutral": 2500,
            "surprise": 1300,
            "joy": 1018,
        }
        dist = EmotionDistribution.from_counts(counts)
        ratio = negativity_ratio(dist, taxonomy.negative_set)
        assert ratio * 100 == pytest.approx(51.82, abs=0.05)

#!/usr/bin/env python3
"""Affective statistics: distributions, negativity, rolling trends, JSD.

Builds a synthetic annotated corpus whose outlets have deliberately different
emotional profiles, then walks through every metric the dashboard serves:
dominant-emotion distributions at both levels, negativity ratios, derived
valence/arousal, rolling means, pairwise Jensen-Shannon divergence, the
cross-outlet polarization index, and matched story groups.

Run:  python3 demos/03_affect_metrics_and_polarization.py
(writes rolling-trend PNGs next to this script when matplotlib is available)
"""
from pathlib import Path

import numpy as np

from affekt.metrics import (
    affect_of,
    api_index,
    build_trends,
    distribution,
    jsd,
    match_stories,
    mean_valence_by_emotion,
    negativity_ratio,
    outlet_profiles,
    polarization_report,
    rolling_mean,
)
from affekt.sampledata import synthetic_annotations, synthetic_corpus
from affekt.taxonomy import default_taxonomy

taxonomy = default_taxonomy()
corpus = synthetic_corpus(n=4000, seed=7)
annotations = synthetic_annotations(corpus, taxonomy, seed=8)

print("=" * 72)
print("1. Dominant-emotion distribution (fine and coarse)")
print("=" * 72)
fine = distribution(annotations, taxonomy, "fine")
coarse = distribution(annotations, taxonomy, "coarse")
for label, share in sorted(fine.shares.items(), key=lambda kv: -kv[1])[:8]:
    print(f"  {label:<16} {fine.counts[label]:>5}  {share * 100:6.2f}%")
print("  ...")
print(f"  coarse classes: " + ", ".join(
    f"{c}={s * 100:.1f}%" for c, s in sorted(coarse.shares.items(), key=lambda kv: -kv[1])
))

ratio = negativity_ratio(fine, taxonomy.negative_set)
print(f"\n  negativity ratio over {sorted(taxonomy.negative_set)}: {ratio * 100:.2f}%")

print()
print("=" * 72)
print("2. Valence/arousal derivation and per-emotion means")
print("=" * 72)
sample = annotations[0]
scores = affect_of(sample, taxonomy)
print(f"  one annotation (dominant={sample.dominant}): "
      f"valence={scores.valence:+.3f} arousal={scores.arousal:.3f}")
means = mean_valence_by_emotion(annotations, taxonomy)
top = sorted(means.items(), key=lambda kv: kv[1])
print(f"  most negative group: {top[0][0]} ({top[0][1]:+.3f})")
print(f"  most positive group: {top[-1][0]} ({top[-1][1]:+.3f})")

print()
print("=" * 72)
print("3. Rolling trends over time buckets")
print("=" * 72)
trends = build_trends(corpus, annotations, taxonomy)
valences = [p["mean_valence"] for p in trends["points"]]
arousals = [p["mean_arousal"] for p in trends["points"]]
rolled = rolling_mean(valences, 7)
print(f"  {len(trends['points'])} daily buckets; "
      f"raw valence range [{min(valences):+.3f}, {max(valences):+.3f}], "
      f"7-day rolling range [{min(rolled):+.3f}, {max(rolled):+.3f}]")

try:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    out = Path(__file__).parent / "rolling_trends.png"
    fig, axes = plt.subplots(2, 1, figsize=(9, 6), sharex=True)
    x = range(len(valences))
    axes[0].plot(x, valences, alpha=0.35, label="daily mean")
    axes[0].plot(x, rolled, label="7-day rolling")
    axes[0].set_ylabel("valence")
    axes[0].legend()
    axes[1].plot(x, arousals, alpha=0.35, label="daily mean")
    axes[1].plot(x, rolling_mean(arousals, 7), label="7-day rolling")
    axes[1].set_ylabel("arousal")
    axes[1].set_xlabel("day index")
    axes[1].legend()
    fig.tight_layout()
    fig.savefig(out, dpi=110)
    print(f"  wrote {out}")
except ImportError:
    print("  (matplotlib not installed; skipping the plot)")

print()
print("=" * 72)
print("4. Cross-outlet divergence and polarization")
print("=" * 72)
profiles, orphans = outlet_profiles(corpus, annotations, taxonomy)
for p in profiles:
    neg = f"{p.negativity_ratio * 100:.1f}%" if p.negativity_ratio is not None else "n/a"
    print(f"  {p.outlet:14} items={p.item_count:<5} "
          f"mean_valence={p.mean_affect.valence:+.3f} negativity={neg}")

print(f"\n  pairwise JSD (coarse, base-2 logs):")
for i, a in enumerate(profiles):
    for b in profiles[i + 1:]:
        d = jsd(a.distribution.share_vector(), b.distribution.share_vector())
        print(f"    {a.outlet:14} vs {b.outlet:14} {d:.4f}")
print(f"  polarization index (mean pairwise JSD): {api_index(profiles):.4f}")

groups, undated = match_stories(corpus, {a.record_id: a for a in annotations})
report = polarization_report(profiles, len(groups))
print(f"  matched story groups: {report.matched_story_count} (undated skipped: {undated})")
if groups:
    g = groups[0]
    print(f"  example group {g.group_id}: outlets={g.outlets} "
          f"dominants={g.per_outlet_dominant}")

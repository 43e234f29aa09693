/** Detailed Emotion Analysis panel: composition of one headline, its
 * valence/arousal gauges, and how other outlets covered the same story.
 * Clicking a compared row re-renders the panel for that record. */
import { arousalGauge, valenceGauge } from "../charts.js";
import {
  coarseColor,
  escapeHtml,
  fixed,
  percent,
  shortDate,
  signed,
  valenceColor,
} from "../format.js";
import type { BreakdownEntry, HeadlineDetail } from "../types.js";

/** Composition segments always sum to <= 100; any remainder (a truncated
 * top-k breakdown) is shown as an explicit "other" segment. */
export function compositionSegments(
  breakdown: BreakdownEntry[],
): Array<{ label: string; percent: number }> {
  const segments = breakdown
    .filter((b) => b.percent > 0)
    .map((b) => ({ label: b.label, percent: Math.min(b.percent, 100) }));
  const total = segments.reduce((acc, s) => acc + s.percent, 0);
  if (total > 100) {
    // Defensive rescale; the API contract already guarantees <= 100.
    const scale = 100 / total;
    segments.forEach((s) => (s.percent *= scale));
  } else if (total < 99.95) {
    segments.push({ label: "other", percent: 100 - total });
  }
  return segments;
}

function compositionBar(breakdown: BreakdownEntry[]): string {
  const segments = compositionSegments(breakdown);
  const parts = segments
    .map((s) => {
      const color = s.label === "other" ? "#3a3f48" : coarseColor(s.label);
      return (
        `<div class="composition-segment" style="width: ${s.percent.toFixed(2)}%; ` +
        `background: ${color}" title="${escapeHtml(s.label)}: ${percent(s.percent)}">` +
        `<span class="segment-label">${escapeHtml(s.label)} ${percent(s.percent)}</span></div>`
      );
    })
    .join("");
  return `<div class="composition-bar">${parts}</div>`;
}

function crossOutletList(detail: HeadlineDetail): string {
  if (detail.cross_outlet.length === 0) {
    return (
      `<div class="empty-state unique-coverage">` +
      `<p>Unique coverage: no other outlet ran a matching story in the window.</p>` +
      `</div>`
    );
  }
  const rows = detail.cross_outlet
    .map(
      (c) =>
        `<tr class="cross-outlet-row" data-record-id="${escapeHtml(c.record_id)}">` +
        `<td>${escapeHtml(c.outlet)}</td>` +
        `<td><span class="chip" style="background: ${coarseColor(c.dominant)}">` +
        `${escapeHtml(c.dominant)}</span></td>` +
        `<td class="num" style="color: ${valenceColor(c.valence)}">${signed(c.valence)}</td>` +
        `<td class="num">${fixed(c.arousal)}</td>` +
        `</tr>`,
    )
    .join("");
  return (
    `<table class="cross-outlet-table"><thead><tr>` +
    `<th>Outlet</th><th>Dominant</th><th>Valence</th><th>Arousal</th>` +
    `</tr></thead><tbody>${rows}</tbody></table>`
  );
}

export function renderDetailPanel(detail: HeadlineDetail): string {
  const rec = detail.record;
  return (
    `<section class="view view-detail">` +
    `<button class="back-link" data-nav="feed">&larr; back to feed</button>` +
    `<header class="detail-header">` +
    `<div class="detail-meta">${escapeHtml(rec.outlet)} &middot; ` +
    `${shortDate(rec.published_at)} &middot; ${escapeHtml(rec.section)}</div>` +
    `<h2 class="detail-headline">${escapeHtml(rec.headline)}</h2>` +
    `</header>` +
    `<div class="panel"><h3>Emotion composition</h3>${compositionBar(detail.breakdown)}</div>` +
    `<div class="panel"><h3>Affect</h3>` +
    `<div class="gauge-row"><span class="gauge-label">valence ` +
    `<strong style="color: ${valenceColor(detail.affect.valence)}">` +
    `${signed(detail.affect.valence)}</strong></span>${valenceGauge(detail.affect.valence)}</div>` +
    `<div class="gauge-row"><span class="gauge-label">arousal ` +
    `<strong>${fixed(detail.affect.arousal)}</strong></span>${arousalGauge(detail.affect.arousal)}</div>` +
    `</div>` +
    `<div class="panel"><h3>Coverage across outlets</h3>${crossOutletList(detail)}</div>` +
    `</section>`
  );
}

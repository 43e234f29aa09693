/** News Feed Analysis view: aggregate stat cards over a filterable list of
 * headlines with per-row emotion and affect. Row clicks select a headline
 * for the detail panel. */
import {
  coarseColor,
  escapeHtml,
  fixed,
  shortDate,
  signed,
  thousands,
  valenceColor,
} from "../format.js";
import type { ViewState } from "../state.js";
import { COARSE_CLASSES, type FeedSummary, type HeadlinePage } from "../types.js";

function statCard(label: string, value: string, accent?: string): string {
  const style = accent ? ` style="color: ${accent}"` : "";
  return (
    `<div class="stat-card"><div class="stat-label">${escapeHtml(label)}</div>` +
    `<div class="stat-value"${style}>${value}</div></div>`
  );
}

function filterBar(state: ViewState, outlets: string[]): string {
  const outletOptions = [`<option value="">All outlets</option>`]
    .concat(
      outlets.map((o) => {
        const sel = state.filters.outlet === o ? " selected" : "";
        return `<option value="${escapeHtml(o)}"${sel}>${escapeHtml(o)}</option>`;
      }),
    )
    .join("");
  const coarseOptions = [`<option value="">All emotions</option>`]
    .concat(
      COARSE_CLASSES.map((c) => {
        const sel = state.filters.coarse === c ? " selected" : "";
        return `<option value="${c}"${sel}>${c}</option>`;
      }),
    )
    .join("");
  return (
    `<div class="filter-bar">` +
    `<select data-filter="outlet" aria-label="outlet filter">${outletOptions}</select>` +
    `<select data-filter="coarse" aria-label="emotion filter">${coarseOptions}</select>` +
    `<input type="date" data-filter="from" aria-label="from date" value="${state.filters.from ?? ""}">` +
    `<input type="date" data-filter="to" aria-label="to date" value="${state.filters.to ?? ""}">` +
    `</div>`
  );
}

function headlineRow(row: HeadlinePage["items"][number]): string {
  return (
    `<tr class="headline-row" data-record-id="${escapeHtml(row.record_id)}">` +
    `<td class="cell-outlet">${escapeHtml(row.outlet)}</td>` +
    `<td class="cell-headline">${escapeHtml(row.headline)}</td>` +
    `<td><span class="chip" style="background: ${coarseColor(row.coarse)}">` +
    `${escapeHtml(row.dominant)}</span></td>` +
    `<td class="num" style="color: ${valenceColor(row.valence)}">${signed(row.valence)}</td>` +
    `<td class="num">${fixed(row.arousal)}</td>` +
    `<td class="cell-date">${shortDate(row.published_at)}</td>` +
    `</tr>`
  );
}

export function renderFeedView(
  summary: FeedSummary,
  page: HeadlinePage,
  state: ViewState,
  outlets: string[],
): string {
  if (summary.total_headlines === 0) {
    return (
      `<section class="view view-feed"><div class="empty-state">` +
      `<h2>No analyzed headlines yet</h2>` +
      `<p>Run an ingestion and classification batch, then compute metrics.</p>` +
      `</div></section>`
    );
  }

  const cards = [
    statCard(
      "Average valence",
      summary.avg_valence === null ? "n/a" : signed(summary.avg_valence),
      summary.avg_valence === null ? undefined : valenceColor(summary.avg_valence),
    ),
    statCard(
      "Average arousal",
      summary.avg_arousal === null ? "n/a" : fixed(summary.avg_arousal),
    ),
    statCard(
      "Dominant emotion",
      summary.dominant_emotion === null
        ? "n/a"
        : escapeHtml(summary.dominant_emotion),
      summary.dominant_emotion === null
        ? undefined
        : coarseColor(summary.dominant_emotion),
    ),
    statCard(
      "Polarization index",
      summary.api === null ? "n/a" : fixed(summary.api, 3),
    ),
  ].join("");

  const rows = page.items.map(headlineRow).join("");
  const listBody = page.items.length
    ? `<table class="headline-table"><thead><tr>` +
      `<th>Outlet</th><th>Headline</th><th>Emotion</th>` +
      `<th>Valence</th><th>Arousal</th><th>Published</th>` +
      `</tr></thead><tbody>${rows}</tbody></table>`
    : `<div class="empty-state"><p>No headlines match the current filters.</p></div>`;

  return (
    `<section class="view view-feed">` +
    `<div class="stat-grid">${cards}</div>` +
    filterBar(state, outlets) +
    `<div class="list-meta">${thousands(page.total)} headlines` +
    ` (showing ${page.items.length})</div>` +
    listBody +
    `</section>`
  );
}

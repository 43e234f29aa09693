/** Bias-Sensitive News Interface: three panels showing per-outlet emotion
 * distributions (stacked bars), rolling intensity trends with a selectable
 * window, and cross-outlet polarization metrics. */
import { lineChart, stackedBar } from "../charts.js";
import { coarseColor, escapeHtml, fixed, thousands } from "../format.js";
import type { ViewState } from "../state.js";
import {
  COARSE_CLASSES,
  type OutletsDistribution,
  type Polarization,
  type TrendsIntensity,
} from "../types.js";

const TREND_WINDOWS = [7, 14, 30];

function legend(): string {
  const items = COARSE_CLASSES.map(
    (c) =>
      `<span class="legend-item"><span class="legend-swatch" ` +
      `style="background: ${coarseColor(c)}"></span>${c}</span>`,
  ).join("");
  return `<div class="legend">${items}</div>`;
}

function distributionPanel(dist: OutletsDistribution): string {
  const rows = dist.outlets
    .map(
      (o) =>
        `<div class="outlet-bar-row">` +
        `<div class="outlet-name">${escapeHtml(o.outlet)}` +
        `<span class="outlet-count">${thousands(o.item_count)} items</span></div>` +
        stackedBar(o.shares, COARSE_CLASSES) +
        `</div>`,
    )
    .join("");
  return (
    `<div class="panel panel-distribution">` +
    `<h3>Emotion distribution by outlet</h3>${legend()}${rows}</div>`
  );
}

function trendsPanel(trends: TrendsIntensity, state: ViewState): string {
  const buttons = TREND_WINDOWS.map((w) => {
    const active = w === state.trendWindow ? " active" : "";
    return `<button class="window-button${active}" data-window="${w}">${w}d</button>`;
  }).join("");
  const chart = lineChart([
    {
      label: "rolling valence",
      color: "#4f9dde",
      values: trends.points.map((p) => p.rolling_valence),
    },
    {
      label: "rolling arousal",
      color: "#d98f2b",
      values: trends.points.map((p) => p.rolling_arousal),
    },
  ]);
  const span = trends.points.length
    ? `${trends.points[0].date} to ${trends.points[trends.points.length - 1].date}`
    : "no dated records";
  return (
    `<div class="panel panel-trends">` +
    `<h3>Emotional intensity over time</h3>` +
    `<div class="window-bar">window: ${buttons}</div>` +
    chart +
    `<div class="trend-span">${trends.points.length} daily buckets, ${span} ` +
    `<span class="series-key" style="color: #4f9dde">valence</span> ` +
    `<span class="series-key" style="color: #d98f2b">arousal</span></div>` +
    `</div>`
  );
}

function polarizationPanel(polar: Polarization): string {
  const metrics =
    `<div class="metric-row">` +
    `<div class="metric"><div class="metric-value">${fixed(polar.api, 3)}</div>` +
    `<div class="metric-label">Affective Polarization Index</div></div>` +
    `<div class="metric"><div class="metric-value">${
      polar.fine_jsd_mean === null ? "n/a" : fixed(polar.fine_jsd_mean, 2)
    }</div>` +
    `<div class="metric-label">Jensen–Shannon Divergence</div></div>` +
    `<div class="metric"><div class="metric-value">${thousands(polar.matched_story_count)}</div>` +
    `<div class="metric-label">Matched stories</div></div>` +
    `</div>`;

  const header = polar.outlets
    .map((o) => `<th>${escapeHtml(o.slice(0, 10))}</th>`)
    .join("");
  const body = polar.pairwise_jsd
    .map((row, i) => {
      const cells = row
        .map((v, j) => {
          const style =
            i === j ? "" : ` style="background: rgba(192, 72, 60, ${(v * 0.8).toFixed(3)})"`;
          return `<td class="num"${style}>${fixed(v, 3)}</td>`;
        })
        .join("");
      return `<tr><th>${escapeHtml(polar.outlets[i])}</th>${cells}</tr>`;
    })
    .join("");
  const matrix =
    `<table class="jsd-matrix"><thead><tr><th></th>${header}</tr></thead>` +
    `<tbody>${body}</tbody></table>`;

  return (
    `<div class="panel panel-polarization">` +
    `<h3>Cross-outlet polarization</h3>${metrics}` +
    `<h4>Pairwise divergence (coarse classes)</h4>${matrix}</div>`
  );
}

export function renderBiasView(
  dist: OutletsDistribution,
  trends: TrendsIntensity,
  polar: Polarization,
  state: ViewState,
): string {
  return (
    `<section class="view view-bias">` +
    distributionPanel(dist) +
    trendsPanel(trends, state) +
    polarizationPanel(polar) +
    `</section>`
  );
}

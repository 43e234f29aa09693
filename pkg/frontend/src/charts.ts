/** Dependency-free SVG builders: pure functions from data to markup. */
import { coarseColor, escapeHtml, percent, valenceColor } from "./format.js";

/** Horizontal stacked bar over share fractions; segments sum to the bar. */
export function stackedBar(
  shares: Record<string, number>,
  order: readonly string[],
  width = 420,
  height = 26,
): string {
  let x = 0;
  const parts: string[] = [];
  for (const name of order) {
    const share = shares[name] ?? 0;
    if (share <= 0) continue;
    const w = share * width;
    parts.push(
      `<rect x="${x.toFixed(2)}" y="0" width="${w.toFixed(2)}" height="${height}" ` +
        `fill="${coarseColor(name)}"><title>${escapeHtml(name)}: ${percent(share * 100)}</title></rect>`,
    );
    x += w;
  }
  return (
    `<svg class="stacked-bar" viewBox="0 0 ${width} ${height}" width="${width}" height="${height}" ` +
    `role="img">${parts.join("")}</svg>`
  );
}

export interface LineSeries {
  label: string;
  color: string;
  values: number[];
}

/** Multi-series line chart with a y-range padded to the data. */
export function lineChart(
  series: LineSeries[],
  width = 640,
  height = 180,
): string {
  const all = series.flatMap((s) => s.values);
  if (all.length === 0) {
    return `<svg class="line-chart" viewBox="0 0 ${width} ${height}" width="${width}" height="${height}"></svg>`;
  }
  const pad = 6;
  let lo = Math.min(...all);
  let hi = Math.max(...all);
  if (hi - lo < 1e-9) {
    lo -= 0.05;
    hi += 0.05;
  }
  const n = Math.max(...series.map((s) => s.values.length));
  const sx = (i: number) => (n <= 1 ? width / 2 : (i / (n - 1)) * (width - 2 * pad) + pad);
  const sy = (v: number) => height - pad - ((v - lo) / (hi - lo)) * (height - 2 * pad);

  const paths = series
    .map((s) => {
      const points = s.values
        .map((v, i) => `${sx(i).toFixed(2)},${sy(v).toFixed(2)}`)
        .join(" ");
      return (
        `<polyline points="${points}" fill="none" stroke="${s.color}" stroke-width="2">` +
        `<title>${escapeHtml(s.label)}</title></polyline>`
      );
    })
    .join("");
  const zero =
    lo < 0 && hi > 0
      ? `<line x1="${pad}" y1="${sy(0).toFixed(2)}" x2="${width - pad}" y2="${sy(0).toFixed(2)}" ` +
        `stroke="#454a54" stroke-dasharray="4 4"/>`
      : "";
  return (
    `<svg class="line-chart" viewBox="0 0 ${width} ${height}" width="${width}" height="${height}" ` +
    `role="img">${zero}${paths}</svg>`
  );
}

/** Valence gauge: diverging bar from -1 to +1 with a marker at the value. */
export function valenceGauge(valence: number, width = 300, height = 34): string {
  const x = ((valence + 1) / 2) * width;
  return (
    `<svg class="gauge" viewBox="0 0 ${width} ${height}" width="${width}" height="${height}" role="img">` +
    `<rect x="0" y="12" width="${width}" height="10" rx="5" fill="#2a2e36"/>` +
    `<rect x="${width / 2 - 1}" y="8" width="2" height="18" fill="#565c68"/>` +
    `<circle cx="${x.toFixed(2)}" cy="17" r="8" fill="${valenceColor(valence)}">` +
    `<title>valence ${valence.toFixed(2)}</title></circle>` +
    `</svg>`
  );
}

/** Arousal gauge: filled bar from 0 to 1. */
export function arousalGauge(arousal: number, width = 300, height = 34): string {
  const w = Math.max(0, Math.min(1, arousal)) * width;
  return (
    `<svg class="gauge" viewBox="0 0 ${width} ${height}" width="${width}" height="${height}" role="img">` +
    `<rect x="0" y="12" width="${width}" height="10" rx="5" fill="#2a2e36"/>` +
    `<rect x="0" y="12" width="${w.toFixed(2)}" height="10" rx="5" fill="#d98f2b">` +
    `<title>arousal ${arousal.toFixed(2)}</title></rect>` +
    `</svg>`
  );
}

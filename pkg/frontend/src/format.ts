/** Formatting and the diverging valence color scale. */

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

/** Signed fixed-point, e.g. +0.27 / -0.70 / 0.00. */
export function signed(value: number, digits = 2): string {
  const fixed = value.toFixed(digits);
  return value > 0 ? `+${fixed}` : fixed;
}

export function fixed(value: number, digits = 2): string {
  return value.toFixed(digits);
}

/** Percent with one decimal, trailing ".0" trimmed: 50 -> "50%", 33.33 -> "33.3%". */
export function percent(value: number): string {
  const rounded = value.toFixed(1);
  return (rounded.endsWith(".0") ? rounded.slice(0, -2) : rounded) + "%";
}

export function thousands(value: number): string {
  return value.toLocaleString("en-US");
}

function lerp(a: number, b: number, t: number): number {
  return Math.round(a + (b - a) * t);
}

const NEGATIVE = [192, 57, 43]; // red at valence -1
const NEUTRAL = [138, 143, 152]; // gray at 0
const POSITIVE = [30, 142, 78]; // green at +1

/** Diverging scale: negative -> red, zero -> gray, positive -> green. */
export function valenceColor(valence: number): string {
  const v = Math.max(-1, Math.min(1, valence));
  const [from, to, t] = v < 0 ? [NEUTRAL, NEGATIVE, -v] : [NEUTRAL, POSITIVE, v];
  const rgb = from.map((c, i) => lerp(c, to[i], t));
  return `rgb(${rgb[0]}, ${rgb[1]}, ${rgb[2]})`;
}

/** Stable palette for the seven coarse classes. */
export const COARSE_COLORS: Record<string, string> = {
  joy: "#2e9e5b",
  sadness: "#3c6fb2",
  anger: "#c0392b",
  fear: "#7d4bb5",
  surprise: "#e0862a",
  disgust: "#6f7d1f",
  neutral: "#8a8f98",
};

export function coarseColor(name: string): string {
  return COARSE_COLORS[name] ?? "#555a63";
}

export function shortDate(iso: string | null): string {
  if (!iso) return "undated";
  return iso.slice(0, 10);
}

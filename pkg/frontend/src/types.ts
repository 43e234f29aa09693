/** Payload types for the /v1 API, mirroring the committed route schemas. */

export interface FeedSummary {
  avg_valence: number | null;
  avg_arousal: number | null;
  dominant_emotion: string | null;
  api: number | null;
  total_headlines: number;
  window: { from: string | null; to: string | null };
}

export interface HeadlineRow {
  record_id: string;
  outlet: string;
  published_at: string | null;
  section: string;
  headline: string;
  dominant: string;
  coarse: string;
  confidence: number;
  valence: number;
  arousal: number;
}

export interface HeadlinePage {
  items: HeadlineRow[];
  total: number;
  limit: number;
  offset: number;
}

export interface OutletDistribution {
  outlet: string;
  item_count: number;
  counts: Record<string, number>;
  shares: Record<string, number>;
}

export interface OutletsDistribution {
  outlets: OutletDistribution[];
}

export interface TrendPoint {
  date: string;
  count: number;
  mean_valence: number;
  mean_arousal: number;
  rolling_valence: number;
  rolling_arousal: number;
}

export interface TrendsIntensity {
  window: number;
  bucket: string;
  points: TrendPoint[];
}

export interface Polarization {
  outlets: string[];
  pairwise_jsd: number[][];
  api: number;
  fine_jsd_mean: number | null;
  matched_story_count: number;
}

export interface BreakdownEntry {
  label: string;
  percent: number;
}

export interface CrossOutletEntry {
  outlet: string;
  record_id: string;
  dominant: string;
  valence: number;
  arousal: number;
}

export interface HeadlineDetail {
  record: {
    record_id: string;
    outlet: string;
    published_at: string | null;
    section: string;
    headline: string;
  };
  affect: { valence: number; arousal: number };
  breakdown: BreakdownEntry[];
  cross_outlet: CrossOutletEntry[];
}

export const COARSE_CLASSES = [
  "joy",
  "sadness",
  "anger",
  "fear",
  "surprise",
  "disgust",
  "neutral",
] as const;

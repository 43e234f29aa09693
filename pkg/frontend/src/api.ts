/** API access: live HTTP client and the committed-fixture client.
 *
 * Base URL resolution order (first match wins):
 *   1. `window.AFFEKT_API_BASE` global
 *   2. `?api=<base>` query parameter
 *   3. `VITE_API_BASE` when built under a bundler that injects import.meta.env
 *   4. same-origin `/v1`
 *
 * `?fixtures=1` switches to the committed fixtures under ./fixtures/ so all
 * three views render with no backend at all.
 */
import type {
  FeedSummary,
  HeadlineDetail,
  HeadlinePage,
  OutletsDistribution,
  Polarization,
  TrendsIntensity,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    message: string,
    readonly kind: "no_data" | "not_found" | "http" | "network",
  ) {
    super(message);
  }
}

export interface HeadlineQuery {
  outlet?: string | null;
  coarse?: string | null;
  from?: string | null;
  to?: string | null;
  limit?: number;
  offset?: number;
}

export interface NewsApi {
  feedSummary(q: HeadlineQuery, signal?: AbortSignal): Promise<FeedSummary>;
  headlines(q: HeadlineQuery, signal?: AbortSignal): Promise<HeadlinePage>;
  outletsDistribution(signal?: AbortSignal): Promise<OutletsDistribution>;
  trendsIntensity(window: number, signal?: AbortSignal): Promise<TrendsIntensity>;
  polarization(signal?: AbortSignal): Promise<Polarization>;
  headlineDetail(recordId: string, signal?: AbortSignal): Promise<HeadlineDetail>;
}

export function resolveApiBase(): string {
  const g = globalThis as Record<string, unknown>;
  if (typeof g.AFFEKT_API_BASE === "string") return g.AFFEKT_API_BASE;
  if (typeof location !== "undefined") {
    const fromQuery = new URLSearchParams(location.search).get("api");
    if (fromQuery) return fromQuery;
  }
  try {
    const env = (import.meta as unknown as { env?: Record<string, string> }).env;
    if (env?.VITE_API_BASE) return env.VITE_API_BASE;
  } catch {
    // import.meta.env only exists under a bundler
  }
  return "/v1";
}

export function fixtureMode(): boolean {
  if (typeof location === "undefined") return false;
  return new URLSearchParams(location.search).get("fixtures") === "1";
}

async function getJson<T>(url: string, signal?: AbortSignal): Promise<T> {
  let resp: Response;
  try {
    resp = await fetch(url, { signal });
  } catch (err) {
    if (err instanceof DOMException && err.name === "AbortError") throw err;
    throw new ApiError(`cannot reach ${url}`, "network");
  }
  if (resp.status === 404) {
    const body = await resp.json().catch(() => ({}));
    const kind = body?.error === "no_data" ? "no_data" : "not_found";
    throw new ApiError(body?.detail ?? "no data", kind);
  }
  if (!resp.ok) {
    throw new ApiError(`HTTP ${resp.status} from ${url}`, "http");
  }
  return (await resp.json()) as T;
}

function queryString(q: HeadlineQuery): string {
  const params = new URLSearchParams();
  if (q.outlet) params.set("outlet", q.outlet);
  if (q.coarse) params.set("coarse", q.coarse);
  if (q.from) params.set("from", q.from);
  if (q.to) params.set("to", q.to);
  if (q.limit != null) params.set("limit", String(q.limit));
  if (q.offset != null) params.set("offset", String(q.offset));
  const s = params.toString();
  return s ? `?${s}` : "";
}

export class HttpNewsApi implements NewsApi {
  constructor(private base: string = resolveApiBase()) {}

  feedSummary(q: HeadlineQuery, signal?: AbortSignal): Promise<FeedSummary> {
    const window: HeadlineQuery = { from: q.from, to: q.to };
    return getJson(`${this.base}/feed/summary${queryString(window)}`, signal);
  }

  headlines(q: HeadlineQuery, signal?: AbortSignal): Promise<HeadlinePage> {
    return getJson(`${this.base}/feed/headlines${queryString(q)}`, signal);
  }

  outletsDistribution(signal?: AbortSignal): Promise<OutletsDistribution> {
    return getJson(`${this.base}/outlets/distribution`, signal);
  }

  trendsIntensity(window: number, signal?: AbortSignal): Promise<TrendsIntensity> {
    return getJson(`${this.base}/trends/intensity?window=${window}`, signal);
  }

  polarization(signal?: AbortSignal): Promise<Polarization> {
    return getJson(`${this.base}/polarization`, signal);
  }

  headlineDetail(recordId: string, signal?: AbortSignal): Promise<HeadlineDetail> {
    return getJson(`${this.base}/headline/${encodeURIComponent(recordId)}`, signal);
  }
}

/** Serves the committed fixture responses; filters are applied client-side
 * so the demo stays interactive. The detail route returns the committed
 * detail fixture for its own record id and synthesizes a minimal detail for
 * any other row on the fixture page. */
export class FixtureNewsApi implements NewsApi {
  constructor(private root = "fixtures") {}

  private load<T>(name: string, signal?: AbortSignal): Promise<T> {
    return getJson<T>(`${this.root}/${name}.json`, signal);
  }

  async feedSummary(_q: HeadlineQuery, signal?: AbortSignal): Promise<FeedSummary> {
    return this.load("feed_summary", signal);
  }

  async headlines(q: HeadlineQuery, signal?: AbortSignal): Promise<HeadlinePage> {
    const page = await this.load<HeadlinePage>("feed_headlines", signal);
    let items = page.items;
    if (q.outlet) items = items.filter((r) => r.outlet === q.outlet);
    if (q.coarse) items = items.filter((r) => r.coarse === q.coarse);
    return { ...page, items, total: items.length };
  }

  outletsDistribution(signal?: AbortSignal): Promise<OutletsDistribution> {
    return this.load("outlets_distribution", signal);
  }

  trendsIntensity(_window: number, signal?: AbortSignal): Promise<TrendsIntensity> {
    return this.load("trends_intensity", signal);
  }

  polarization(signal?: AbortSignal): Promise<Polarization> {
    return this.load("polarization", signal);
  }

  async headlineDetail(recordId: string, signal?: AbortSignal): Promise<HeadlineDetail> {
    const detail = await this.load<HeadlineDetail>("headline_detail", signal);
    if (detail.record.record_id === recordId) return detail;
    const page = await this.load<HeadlinePage>("feed_headlines", signal);
    const row = page.items.find((r) => r.record_id === recordId);
    if (!row) throw new ApiError(`no fixture for ${recordId}`, "not_found");
    return {
      record: {
        record_id: row.record_id,
        outlet: row.outlet,
        published_at: row.published_at,
        section: row.section,
        headline: row.headline,
      },
      affect: { valence: row.valence, arousal: row.arousal },
      breakdown: [{ label: row.dominant, percent: row.confidence * 100 }],
      cross_outlet: [],
    };
  }
}

export function createApi(): NewsApi {
  return fixtureMode() ? new FixtureNewsApi() : new HttpNewsApi();
}

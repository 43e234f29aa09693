/** Single-page shell: hash routing over the three views, async data loading
 * with per-navigation cancellation, explicit empty and error states. */
import { ApiError, createApi, type NewsApi } from "./api.js";
import { escapeHtml } from "./format.js";
import {
  applyHash,
  hashFor,
  initialState,
  navigate,
  setFilters,
  setTrendWindow,
  type ViewName,
  type ViewState,
} from "./state.js";
import { renderBiasView } from "./views/bias.js";
import { renderDetailPanel } from "./views/detail.js";
import { renderFeedView } from "./views/feed.js";

const NAV_ITEMS: Array<[ViewName, string]> = [
  ["feed", "News Feed Analysis"],
  ["bias", "Bias-Sensitive Interface"],
  ["detail", "Detailed Emotion Analysis"],
];

export class App {
  private state: ViewState = initialState;
  private controller: AbortController | null = null;
  private knownOutlets: string[] = [];

  constructor(
    private root: HTMLElement,
    private api: NewsApi = createApi(),
  ) {}

  start(): void {
    window.addEventListener("hashchange", () => {
      this.state = applyHash(this.state, location.hash);
      void this.render();
    });
    this.root.addEventListener("click", (evt) => this.onClick(evt));
    this.root.addEventListener("change", (evt) => this.onChange(evt));
    this.state = applyHash(this.state, location.hash);
    void this.render();
  }

  private go(view: ViewName, selected?: string): void {
    this.state = navigate(this.state, view, selected);
    const hash = hashFor(this.state);
    if (location.hash !== hash) {
      location.hash = hash; // triggers hashchange -> render
    } else {
      void this.render();
    }
  }

  private onClick(evt: Event): void {
    const target = evt.target as HTMLElement;
    const nav = target.closest<HTMLElement>("[data-nav]");
    if (nav?.dataset.nav) {
      this.go(nav.dataset.nav as ViewName);
      return;
    }
    const row = target.closest<HTMLElement>("[data-record-id]");
    if (row?.dataset.recordId) {
      this.go("detail", row.dataset.recordId);
      return;
    }
    const windowButton = target.closest<HTMLElement>("[data-window]");
    if (windowButton?.dataset.window) {
      this.state = setTrendWindow(this.state, Number(windowButton.dataset.window));
      void this.render();
      return;
    }
    if (target.closest("[data-retry]")) {
      void this.render();
    }
  }

  private onChange(evt: Event): void {
    const el = evt.target as HTMLInputElement | HTMLSelectElement;
    const key = el.dataset.filter;
    if (!key) return;
    this.state = setFilters(this.state, { [key]: el.value || null });
    void this.render();
  }

  private setHtml(html: string): void {
    const tabs = NAV_ITEMS.map(([view, label]) => {
      const active = view === this.state.activeView ? " active" : "";
      const disabled =
        view === "detail" && !this.state.selectedHeadline ? " disabled" : "";
      return (
        `<button class="tab${active}"${disabled} data-nav="${view}">` +
        `${escapeHtml(label)}</button>`
      );
    }).join("");
    this.root.innerHTML =
      `<header class="app-header"><h1>affekt</h1><nav class="tabs">${tabs}</nav></header>` +
      html;
  }

  async render(): Promise<void> {
    this.controller?.abort();
    const controller = new AbortController();
    this.controller = controller;
    const signal = controller.signal;
    this.setHtml(`<div class="loading">loading…</div>`);

    try {
      switch (this.state.activeView) {
        case "feed": {
          const q = { ...this.state.filters, limit: 50 };
          const [summary, page] = await Promise.all([
            this.api.feedSummary(q, signal),
            this.api.headlines(q, signal),
          ]);
          if (signal.aborted) return;
          if (!this.knownOutlets.length) {
            this.knownOutlets = [...new Set(page.items.map((r) => r.outlet))].sort();
          }
          this.setHtml(renderFeedView(summary, page, this.state, this.knownOutlets));
          break;
        }
        case "bias": {
          const [dist, trends, polar] = await Promise.all([
            this.api.outletsDistribution(signal),
            this.api.trendsIntensity(this.state.trendWindow, signal),
            this.api.polarization(signal),
          ]);
          if (signal.aborted) return;
          this.setHtml(renderBiasView(dist, trends, polar, this.state));
          break;
        }
        case "detail": {
          const detail = await this.api.headlineDetail(
            this.state.selectedHeadline as string,
            signal,
          );
          if (signal.aborted) return;
          this.setHtml(renderDetailPanel(detail));
          break;
        }
      }
    } catch (err) {
      if (err instanceof DOMException && err.name === "AbortError") return;
      if (signal.aborted) return;
      this.setHtml(renderError(err));
    }
  }
}

export function renderError(err: unknown): string {
  const isNoData = err instanceof ApiError && err.kind === "no_data";
  const heading = isNoData ? "No data available" : "Could not reach the API";
  const message =
    err instanceof ApiError
      ? err.message
      : err instanceof Error
        ? err.message
        : String(err);
  return (
    `<div class="error-banner${isNoData ? " no-data" : ""}">` +
    `<h2>${escapeHtml(heading)}</h2>` +
    `<p>${escapeHtml(message)}</p>` +
    `<button data-retry>Retry</button></div>`
  );
}

if (typeof document !== "undefined" && document.getElementById("app")) {
  new App(document.getElementById("app") as HTMLElement).start();
}

/** View state and hash routing. Pure functions, no DOM. */

export type ViewName = "feed" | "bias" | "detail";

export interface ViewState {
  activeView: ViewName;
  filters: {
    outlet: string | null;
    coarse: string | null;
    from: string | null;
    to: string | null;
  };
  selectedHeadline: string | null;
  trendWindow: number;
}

export const initialState: ViewState = {
  activeView: "feed",
  filters: { outlet: null, coarse: null, from: null, to: null },
  selectedHeadline: null,
  trendWindow: 7,
};

/** Switch views; the detail view is unreachable without a selected headline. */
export function navigate(
  state: ViewState,
  view: ViewName,
  selectedHeadline?: string,
): ViewState {
  const selected = selectedHeadline ?? state.selectedHeadline;
  if (view === "detail" && !selected) {
    return { ...state, activeView: "feed" };
  }
  return { ...state, activeView: view, selectedHeadline: selected };
}

export function setFilters(
  state: ViewState,
  filters: Partial<ViewState["filters"]>,
): ViewState {
  return { ...state, filters: { ...state.filters, ...filters } };
}

export function setTrendWindow(state: ViewState, window: number): ViewState {
  return { ...state, trendWindow: Math.max(1, Math.floor(window)) };
}

export function hashFor(state: ViewState): string {
  if (state.activeView === "detail" && state.selectedHeadline) {
    return `#/detail/${state.selectedHeadline}`;
  }
  return `#/${state.activeView}`;
}

export function applyHash(state: ViewState, hash: string): ViewState {
  const parts = hash.replace(/^#\/?/, "").split("/");
  const view = parts[0] as ViewName;
  if (view === "detail" && parts[1]) {
    return navigate(state, "detail", parts[1]);
  }
  if (view === "feed" || view === "bias") {
    return navigate(state, view);
  }
  return navigate(state, "feed");
}

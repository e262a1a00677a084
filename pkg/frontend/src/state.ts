/** Single source of truth for everything the two frames render.
 *
 * All view decisions (which window, which appliances, which tab, whether
 * predictions have been revealed yet) live here; the DOM is a projection
 * of this object plus the last fetched payloads, never a second store.
 */

export const WINDOW_LENGTHS = [360, 720, 1440] as const;

export type WindowLength = (typeof WINDOW_LENGTHS)[number];

/** Window sizes are surfaced in wall-clock terms at the fixed 1-min period. */
export const LENGTH_LABELS: Record<WindowLength, string> = {
  360: "6 hours",
  720: "12 hours",
  1440: "1 day",
};

export type Tab = "aggregate" | "per_device" | "probabilities";

export type Direction = "prev" | "next";

export interface BenchmarkFilters {
  task: "detection" | "localization" | null;
  metric: string | null;
}

export interface ViewState {
  dataset: string;
  house: string;
  length: WindowLength;
  /** Start of the visible window in timesteps; always a multiple of length. */
  offset: number;
  /** Series length of the selected house, from the API house listing. */
  totalLength: number;
  appliances: string[];
  tab: Tab;
  /** Guess-then-reveal: predictions and truth overlays render only once true. */
  revealed: boolean;
  filters: BenchmarkFilters;
}

export function initialState(): ViewState {
  return {
    dataset: "",
    house: "",
    length: 360,
    offset: 0,
    totalLength: 0,
    appliances: [],
    tab: "aggregate",
    revealed: false,
    filters: { task: null, metric: null },
  };
}

export function isWindowLength(value: number): value is WindowLength {
  return (WINDOW_LENGTHS as readonly number[]).includes(value);
}

/** Largest valid offset for the current house, or 0 when nothing fits. */
export function maxOffset(state: ViewState): number {
  if (state.totalLength < state.length) return 0;
  return Math.floor((state.totalLength - state.length) / state.length) * state.length;
}

export function canNavigate(state: ViewState, direction: Direction): boolean {
  if (direction === "prev") return state.offset - state.length >= 0;
  return state.offset + 2 * state.length <= state.totalLength;
}

/** Shift by one window. Out-of-range moves return the state unchanged
 *  (the buttons are disabled rather than erroring). */
export function navigate(state: ViewState, direction: Direction): ViewState {
  if (!canNavigate(state, direction)) return state;
  const delta = direction === "next" ? state.length : -state.length;
  return { ...state, offset: state.offset + delta, revealed: false };
}

/** Re-snap the offset so both invariants hold after a length change:
 *  offset stays a multiple of length and the window stays in range. */
export function withLength(state: ViewState, length: WindowLength): ViewState {
  const next = { ...state, length, revealed: false };
  const snapped = Math.floor(state.offset / length) * length;
  next.offset = Math.max(0, Math.min(snapped, maxOffset(next)));
  return next;
}

export function withHouse(state: ViewState, house: string, totalLength: number): ViewState {
  return { ...state, house, totalLength, offset: 0, revealed: false };
}

export function withDataset(state: ViewState): ViewState {
  // house selection is re-established by the caller from the new listing
  return { ...state, house: "", totalLength: 0, offset: 0, revealed: false };
}

export function toggleAppliance(state: ViewState, name: string): ViewState {
  const selected = state.appliances.includes(name)
    ? state.appliances.filter((a) => a !== name)
    : [...state.appliances, name];
  return { ...state, appliances: selected };
}

export function reveal(state: ViewState): ViewState {
  return { ...state, revealed: true };
}

/** Entry point: owns the ViewState, keeps the URL in sync, and routes
 *  events and fetches to the two frames. One in-flight fetch per panel;
 *  a stale response (superseded by a newer request) is dropped. */

import {
  ApiFailure,
  fetchBenchmark,
  fetchDatasets,
  fetchHouses,
  fetchSignatures,
  fetchWindow,
  PanelFetcher,
  postPredict,
} from "./api.js";
import { BenchmarkData, renderBenchmark } from "./benchmark.js";
import { PlaygroundData, renderPlayground } from "./playground.js";
import {
  initialState,
  isWindowLength,
  LENGTH_LABELS,
  maxOffset,
  navigate,
  reveal,
  toggleAppliance,
  ViewState,
  WINDOW_LENGTHS,
  withHouse,
  withLength,
} from "./state.js";
import type { DatasetInfo, HouseInfo } from "./types.js";
import { decodeState, encodeState } from "./url.js";

type Frame = "playground" | "benchmark";

function message(err: unknown): string {
  if (err instanceof ApiFailure) return `${err.code}: ${err.message}`;
  return String(err);
}

export class App {
  state: ViewState = initialState();
  frame: Frame = "playground";
  datasets: DatasetInfo[] = [];
  houses: HouseInfo[] = [];

  playgroundData: PlaygroundData = { window: null, predict: null, signatures: null, error: null };
  benchmarkData: BenchmarkData = { payload: null, windowView: null, error: null };

  private panels = {
    window: new PanelFetcher(),
    predict: new PanelFetcher(),
    benchmark: new PanelFetcher(),
  };

  private header = document.createElement("div");
  private playgroundRoot = document.createElement("section");
  private benchmarkRoot = document.createElement("section");

  constructor(private root: HTMLElement) {
    this.header.className = "app-header";
    this.playgroundRoot.className = "frame playground-frame";
    this.benchmarkRoot.className = "frame benchmark-frame";
    root.append(this.header, this.playgroundRoot, this.benchmarkRoot);
    root.addEventListener("click", (ev) => this.onClick(ev));
    root.addEventListener("change", (ev) => this.onChange(ev));
  }

  async boot(): Promise<void> {
    const params = decodeState(window.location.search);
    try {
      this.datasets = (await fetchDatasets()).datasets;
    } catch (err) {
      this.playgroundData.error = message(err);
      this.render();
      return;
    }
    const wanted = params.dataset;
    const dataset =
      this.datasets.find((d) => d.dataset_id === wanted) ?? this.datasets[0];
    if (dataset) {
      this.state.dataset = dataset.dataset_id;
      await this.loadHouses(params.house, params.length, params.offset);
    }
    fetchSignatures()
      .then((sigs) => {
        this.playgroundData.signatures = sigs;
        this.render();
      })
      .catch(() => undefined); // the expander is optional decoration
    this.render();
  }

  private async loadHouses(
    wantedHouse?: string,
    length?: number,
    offset?: number,
  ): Promise<void> {
    try {
      this.houses = (await fetchHouses(this.state.dataset)).houses;
    } catch (err) {
      this.playgroundData.error = message(err);
      return;
    }
    const house = this.houses.find((h) => h.house_id === wantedHouse) ?? this.houses[0];
    if (!house) return;
    this.state = withHouse(this.state, house.house_id, house.total_length);
    this.state.appliances = [...house.appliances];
    if (length !== undefined && isWindowLength(length)) {
      this.state = withLength(this.state, length);
    }
    if (offset !== undefined && offset % this.state.length === 0) {
      this.state.offset = Math.min(offset, maxOffset(this.state));
    }
    await Promise.all([this.loadWindow(), this.loadBenchmark()]);
  }

  private async loadWindow(): Promise<void> {
    const { dataset, house, offset, length } = this.state;
    if (!dataset || !house) return;
    try {
      const payload = await this.panels.window.latest(() =>
        fetchWindow(dataset, house, offset, length),
      );
      if (payload === null) return; // a newer request won
      this.playgroundData.window = payload;
      this.playgroundData.predict = null;
      this.playgroundData.error = null;
    } catch (err) {
      this.playgroundData.error = message(err);
    }
    this.render();
  }

  private async loadPredict(): Promise<void> {
    const { dataset, house, offset, length, appliances } = this.state;
    if (!this.state.revealed || appliances.length === 0) return;
    try {
      const payload = await this.panels.predict.latest(() =>
        postPredict(dataset, house, offset, length, appliances),
      );
      if (payload === null) return;
      this.playgroundData.predict = payload;
      this.playgroundData.error = null;
      if (this.playgroundData.window) {
        this.benchmarkData.windowView = {
          window: this.playgroundData.window,
          predict: payload,
        };
      }
    } catch (err) {
      this.playgroundData.error = message(err);
    }
    this.render();
  }

  private async loadBenchmark(): Promise<void> {
    if (!this.state.dataset) return;
    try {
      const payload = await this.panels.benchmark.latest(() =>
        fetchBenchmark(this.state.dataset, this.state.filters.task, this.state.filters.metric),
      );
      if (payload === null) return;
      this.benchmarkData.payload = payload;
      this.benchmarkData.error = null;
    } catch (err) {
      this.benchmarkData.error = message(err);
    }
    this.render();
  }

  private syncUrl(): void {
    window.history.replaceState(null, "", encodeState(this.state));
  }

  private onClick(ev: Event): void {
    const target = (ev.target as HTMLElement).closest<HTMLElement>("[data-action]");
    if (!target) return;
    switch (target.dataset.action) {
      case "prev":
      case "next": {
        const moved = navigate(this.state, target.dataset.action);
        if (moved !== this.state) {
          this.state = moved;
          this.playgroundData.predict = null;
          this.syncUrl();
          void this.loadWindow();
        }
        break;
      }
      case "reveal":
        this.state = reveal(this.state);
        this.render();
        void this.loadPredict();
        break;
      case "tab":
        this.state = { ...this.state, tab: target.dataset.tab as ViewState["tab"] };
        this.render();
        break;
      case "frame":
        this.frame = target.dataset.frame as Frame;
        this.render();
        break;
    }
  }

  private onChange(ev: Event): void {
    const target = ev.target as HTMLElement;
    const action = target.dataset.action;
    if (action === "toggle-appliance" && target instanceof HTMLInputElement) {
      this.state = toggleAppliance(this.state, target.dataset.name ?? "");
      this.render();
      if (this.state.revealed) void this.loadPredict();
      return;
    }
    if (!(target instanceof HTMLSelectElement)) return;
    switch (action) {
      case "pick-dataset":
        this.state = { ...initialState(), dataset: target.value };
        this.playgroundData = {
          window: null, predict: null,
          signatures: this.playgroundData.signatures, error: null,
        };
        this.benchmarkData = { payload: null, windowView: null, error: null };
        this.syncUrl();
        void this.loadHouses();
        break;
      case "pick-house": {
        const house = this.houses.find((h) => h.house_id === target.value);
        if (house) {
          this.state = withHouse(this.state, house.house_id, house.total_length);
          this.state.appliances = [...house.appliances];
          this.playgroundData.predict = null;
          this.syncUrl();
          void this.loadWindow();
        }
        break;
      }
      case "pick-length": {
        const length = Number(target.value);
        if (isWindowLength(length)) {
          this.state = withLength(this.state, length);
          this.playgroundData.predict = null;
          this.syncUrl();
          void this.loadWindow();
        }
        break;
      }
      case "filter-task":
        this.state.filters.task = (target.value || null) as ViewState["filters"]["task"];
        void this.loadBenchmark();
        break;
      case "filter-metric":
        this.state.filters.metric = target.value || null;
        void this.loadBenchmark();
        break;
    }
  }

  render(): void {
    this.renderHeader();
    this.playgroundRoot.classList.toggle("hidden", this.frame !== "playground");
    this.benchmarkRoot.classList.toggle("hidden", this.frame !== "benchmark");
    renderPlayground(this.playgroundRoot, this.state, this.playgroundData);
    renderBenchmark(this.benchmarkRoot, this.state, this.benchmarkData);
  }

  private renderHeader(): void {
    this.header.replaceChildren();

    const title = document.createElement("h1");
    title.textContent = "DeviceScope";

    const frames = document.createElement("nav");
    for (const frame of ["playground", "benchmark"] as const) {
      const button = document.createElement("button");
      button.dataset.action = "frame";
      button.dataset.frame = frame;
      button.textContent = frame === "playground" ? "Playground" : "Benchmark";
      if (this.frame === frame) button.classList.add("active");
      frames.append(button);
    }

    const dataset = this.select("pick-dataset", this.datasets.map((d) => d.dataset_id), this.state.dataset);
    const house = this.select("pick-house", this.houses.map((h) => h.house_id), this.state.house);
    const length = document.createElement("select");
    length.dataset.action = "pick-length";
    for (const value of WINDOW_LENGTHS) {
      const option = document.createElement("option");
      option.value = String(value);
      option.textContent = LENGTH_LABELS[value];
      length.append(option);
    }
    length.value = String(this.state.length);

    this.header.append(title, frames, dataset, house, length);
  }

  private select(action: string, values: string[], current: string): HTMLSelectElement {
    const el = document.createElement("select");
    el.dataset.action = action;
    for (const value of values) {
      const option = document.createElement("option");
      option.value = value;
      option.textContent = value;
      el.append(option);
    }
    el.value = current;
    return el;
  }
}

const mount = document.getElementById("app");
if (mount) {
  const app = new App(mount);
  void app.boot();
}

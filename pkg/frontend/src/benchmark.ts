/** Benchmark frame: stored evaluation rows as a filterable table, the
 *  label-efficiency chart, and a qualitative per-window viewer. */

import { labelEfficiencyChart, lineChart, statusStrip } from "./charts.js";
import type { ViewState } from "./state.js";
import type { BenchmarkPayload, PredictPayload, WindowPayload } from "./types.js";

export interface BenchmarkData {
  payload: BenchmarkPayload | null;
  /** Current playground window, for side-by-side qualitative comparison. */
  windowView: { window: WindowPayload; predict: PredictPayload } | null;
  error: string | null;
}

function upsertBanner(root: HTMLElement, message: string | null): void {
  let banner = root.querySelector<HTMLElement>(".error-banner");
  if (message === null) {
    banner?.remove();
    return;
  }
  if (!banner) {
    banner = document.createElement("div");
    banner.className = "error-banner";
    banner.setAttribute("role", "alert");
    root.prepend(banner);
  }
  banner.textContent = message;
}

export function metricColumns(payload: BenchmarkPayload): string[] {
  const keys = new Set<string>();
  for (const row of payload.rows) {
    for (const key of Object.keys(row.metrics)) keys.add(key);
  }
  return [...keys].sort();
}

export function renderBenchmark(root: HTMLElement, state: ViewState, data: BenchmarkData): void {
  upsertBanner(root, data.error);
  if (data.error !== null) return;

  let content = root.querySelector<HTMLElement>(":scope > .benchmark-content");
  if (!content) {
    content = document.createElement("div");
    content.className = "benchmark-content";
    root.append(content);
  }
  content.replaceChildren();

  content.append(filterBar(state, data.payload));

  const payload = data.payload;
  if (!payload || payload.rows.length === 0) {
    const empty = document.createElement("div");
    empty.className = "no-results";
    empty.textContent = "no results recorded for this dataset";
    content.append(empty);
    return;
  }

  content.append(table(payload));

  const metric = chartMetric(state, payload);
  if (metric) {
    const section = document.createElement("div");
    section.className = "chart-section";
    const heading = document.createElement("h3");
    heading.textContent = `${metric} vs training labels used`;
    section.append(heading, labelEfficiencyChart(payload.rows, metric));
    content.append(section);
  }

  content.append(windowViewer(data));
}

/** The chart needs a single metric: the active filter when set, otherwise
 *  f1 when present, otherwise the first metric column. */
export function chartMetric(state: ViewState, payload: BenchmarkPayload): string | null {
  if (state.filters.metric) return state.filters.metric;
  const columns = metricColumns(payload);
  if (columns.includes("f1")) return "f1";
  return columns[0] ?? null;
}

function filterBar(state: ViewState, payload: BenchmarkPayload | null): HTMLElement {
  const bar = document.createElement("div");
  bar.className = "filter-bar";

  const task = document.createElement("select");
  task.dataset.action = "filter-task";
  for (const value of ["", "detection", "localization"]) {
    const option = document.createElement("option");
    option.value = value;
    option.textContent = value || "all tasks";
    task.append(option);
  }
  task.value = state.filters.task ?? "";

  const metric = document.createElement("select");
  metric.dataset.action = "filter-metric";
  const known = payload ? metricColumns(payload) : [];
  if (state.filters.metric && !known.includes(state.filters.metric)) {
    known.push(state.filters.metric);
  }
  for (const value of ["", ...known]) {
    const option = document.createElement("option");
    option.value = value;
    option.textContent = value || "all metrics";
    metric.append(option);
  }
  metric.value = state.filters.metric ?? "";

  bar.append(label("task", task), label("metric", metric));
  return bar;
}

function label(text: string, el: HTMLElement): HTMLElement {
  const wrap = document.createElement("label");
  wrap.append(document.createTextNode(`${text}: `), el);
  return wrap;
}

function cell(text: string): HTMLTableCellElement {
  const td = document.createElement("td");
  td.textContent = text;
  return td;
}

function table(payload: BenchmarkPayload): HTMLElement {
  const columns = metricColumns(payload);
  const tbl = document.createElement("table");
  tbl.className = "metric-table";

  const thead = document.createElement("thead");
  const head = document.createElement("tr");
  for (const title of ["method", "appliance", "task", "labels used", "windows", ...columns]) {
    const th = document.createElement("th");
    th.textContent = title;
    head.append(th);
  }
  thead.append(head);

  const tbody = document.createElement("tbody");
  for (const row of payload.rows) {
    const tr = document.createElement("tr");
    tr.dataset.method = row.method_id;
    tr.append(cell(row.method_id), cell(row.appliance), cell(row.task));
    const labels = cell(String(row.labels_used));
    labels.dataset.labelsUsed = String(row.labels_used);
    tr.append(labels, cell(String(row.windows_evaluated)));
    for (const column of columns) {
      const value = row.metrics[column];
      tr.append(cell(value === undefined ? "" : String(value)));
    }
    tbody.append(tr);
  }
  tbl.append(thead, tbody);
  return tbl;
}

function windowViewer(data: BenchmarkData): HTMLElement {
  const viewer = document.createElement("div");
  viewer.className = "window-viewer";
  const heading = document.createElement("h3");
  heading.textContent = "Window viewer";
  viewer.append(heading);

  if (!data.windowView) {
    const hint = document.createElement("p");
    hint.className = "viewer-hint";
    hint.textContent = "open a window in the playground to compare predictions here";
    viewer.append(hint);
    return viewer;
  }

  const { window: win, predict } = data.windowView;
  const mini = lineChart(win.aggregate, { width: 640, height: 110, color: "#2563eb" });
  mini.classList.add("viewer-aggregate");
  viewer.append(mini);
  for (const [name, prediction] of Object.entries(predict.predictions)) {
    viewer.append(statusStrip(prediction.y_hat, {
      label: name,
      detected: prediction.detected,
      width: 640,
    }));
  }
  return viewer;
}

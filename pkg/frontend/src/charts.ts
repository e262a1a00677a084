/** SVG chart builders. Everything drawn here comes straight from an API
 *  payload array; the only client-side transform is display decimation. */

import { decimate, MAX_POINTS, nearestIndex } from "./decimate.js";
import type { BenchmarkRow } from "./types.js";

const SVG_NS = "http://www.w3.org/2000/svg";

export const SERIES_COLORS = [
  "#2563eb", "#dc2626", "#059669", "#d97706", "#7c3aed", "#db2777",
];

export interface ChartOptions {
  width?: number;
  height?: number;
  color?: string;
  unit?: string;
  maxPoints?: number;
}

function svgEl<K extends keyof SVGElementTagNameMap>(
  tag: K,
  attrs: Record<string, string | number> = {},
): SVGElementTagNameMap[K] {
  const el = document.createElementNS(SVG_NS, tag);
  for (const [k, v] of Object.entries(attrs)) el.setAttribute(k, String(v));
  return el;
}

/** Contiguous runs of active (=1) samples, end-exclusive. */
export function runsOf(status: number[]): Array<{ start: number; end: number }> {
  const runs: Array<{ start: number; end: number }> = [];
  let start = -1;
  for (let i = 0; i < status.length; i++) {
    if (status[i] === 1 && start === -1) start = i;
    if (status[i] !== 1 && start !== -1) {
      runs.push({ start, end: i });
      start = -1;
    }
  }
  if (start !== -1) runs.push({ start, end: status.length });
  return runs;
}

interface Frame {
  svg: SVGSVGElement;
  plotW: number;
  plotH: number;
  left: number;
  top: number;
}

function makeFrame(width: number, height: number, left = 42, top = 8, bottom = 16): Frame {
  const svg = svgEl("svg", {
    viewBox: `0 0 ${width} ${height}`,
    width,
    height,
    class: "chart",
  });
  return { svg, plotW: width - left - 8, plotH: height - top - bottom, left, top };
}

function yDomain(values: (number | null)[]): [number, number] {
  let lo = Infinity;
  let hi = -Infinity;
  for (const v of values) {
    if (v === null) continue;
    if (v < lo) lo = v;
    if (v > hi) hi = v;
  }
  if (lo === Infinity) return [0, 1];
  if (lo === hi) return [lo - 1, hi + 1];
  const pad = (hi - lo) * 0.05;
  return [Math.min(lo, 0), hi + pad];
}

function fmt(value: number): string {
  return Math.abs(value) >= 100 ? value.toFixed(0) : String(value);
}

/** Power trace with gaps at missing readings. Hovering reads the exact
 *  sample from the full payload array, not from the decimated path. */
export function lineChart(values: (number | null)[], opts: ChartOptions = {}): HTMLElement {
  const width = opts.width ?? 900;
  const height = opts.height ?? 180;
  const { svg, plotW, plotH, left, top } = makeFrame(width, height);
  const [lo, hi] = yDomain(values);
  const n = values.length;
  const x = (i: number) => left + (n <= 1 ? 0 : (i / (n - 1)) * plotW);
  const y = (v: number) => top + plotH - ((v - lo) / (hi - lo)) * plotH;

  const idx = decimate(values, opts.maxPoints ?? MAX_POINTS);
  let d = "";
  let pen = false;
  for (const i of idx) {
    const v = values[i];
    if (v === null || v === undefined) {
      pen = false;
      continue;
    }
    d += `${pen ? "L" : "M"}${x(i).toFixed(1)},${y(v).toFixed(1)}`;
    pen = true;
  }
  const path = svgEl("path", {
    d,
    fill: "none",
    stroke: opts.color ?? SERIES_COLORS[0]!,
    "stroke-width": 1.2,
    class: "trace",
  });
  path.dataset.points = String(idx.length);

  svg.append(
    svgEl("line", {
      x1: left, y1: top + plotH, x2: left + plotW, y2: top + plotH,
      stroke: "#9ca3af", "stroke-width": 1,
    }),
    axisLabel(left - 4, top + 10, fmt(hi)),
    axisLabel(left - 4, top + plotH, fmt(Math.max(lo, 0))),
    path,
  );

  const readout = svgEl("text", {
    x: left + plotW, y: top + 10, "text-anchor": "end", class: "readout",
  });
  svg.append(readout);
  svg.addEventListener("mousemove", (ev: MouseEvent) => {
    const rect = svg.getBoundingClientRect();
    const px = ((ev.clientX - rect.left) / Math.max(rect.width, 1)) * width - left;
    const i = nearestIndex(n, plotW, px);
    const v = values[i];
    readout.textContent = v === null || v === undefined
      ? `t=${i}: missing`
      : `t=${i}: ${v}${opts.unit ?? " W"}`;
  });

  const box = document.createElement("div");
  box.className = "line-chart";
  box.append(svg);
  return box;
}

function axisLabel(x: number, y: number, text: string): SVGTextElement {
  const el = svgEl("text", { x, y, "text-anchor": "end", class: "axis-label" });
  el.textContent = text;
  return el;
}

export interface StripOptions extends ChartOptions {
  label: string;
  detected: boolean;
}

/** One appliance's predicted on/off track. Each active rect carries its run
 *  bounds so the drawing is checkable against the payload verbatim. */
export function statusStrip(status: number[], opts: StripOptions): HTMLElement {
  const width = opts.width ?? 900;
  const height = opts.height ?? 34;
  const { svg, plotW, plotH, left, top } = makeFrame(width, height, 42, 4, 4);
  svg.classList.add("status-strip");

  svg.append(svgEl("rect", {
    x: left, y: top, width: plotW, height: plotH,
    fill: "#f3f4f6", stroke: "#d1d5db", "stroke-width": 0.5,
  }));

  const n = status.length;
  if (opts.detected) {
    for (const run of runsOf(status)) {
      const rect = svgEl("rect", {
        x: left + (run.start / n) * plotW,
        y: top,
        width: ((run.end - run.start) / n) * plotW,
        height: plotH,
        fill: opts.color ?? SERIES_COLORS[2]!,
        class: "active-run",
      });
      rect.dataset.start = String(run.start);
      rect.dataset.end = String(run.end);
      svg.append(rect);
    }
  }

  const box = document.createElement("div");
  box.className = "strip-row";
  if (!opts.detected) box.classList.add("not-detected");
  const label = document.createElement("span");
  label.className = "strip-label";
  label.textContent = opts.detected ? opts.label : `${opts.label} (not detected)`;
  box.append(label, svg);
  return box;
}

/** Per-device view: the measured channel drawn over the predicted runs,
 *  sharing one x scale so misses and false alarms line up visually. */
export function deviceOverlay(
  truth: (number | null)[],
  yHat: number[],
  opts: ChartOptions & { label: string },
): HTMLElement {
  const width = opts.width ?? 900;
  const height = opts.height ?? 120;
  const { svg, plotW, plotH, left, top } = makeFrame(width, height);
  svg.classList.add("device-overlay");

  const n = yHat.length;
  for (const run of runsOf(yHat)) {
    const rect = svgEl("rect", {
      x: left + (run.start / n) * plotW,
      y: top,
      width: ((run.end - run.start) / n) * plotW,
      height: plotH,
      fill: "#fde68a",
      class: "pred-run",
    });
    rect.dataset.start = String(run.start);
    rect.dataset.end = String(run.end);
    svg.append(rect);
  }

  const [lo, hi] = yDomain(truth);
  const x = (i: number) => left + (truth.length <= 1 ? 0 : (i / (truth.length - 1)) * plotW);
  const y = (v: number) => top + plotH - ((v - lo) / (hi - lo)) * plotH;
  let d = "";
  let pen = false;
  for (const i of decimate(truth, opts.maxPoints ?? MAX_POINTS)) {
    const v = truth[i];
    if (v === null || v === undefined) {
      pen = false;
      continue;
    }
    d += `${pen ? "L" : "M"}${x(i).toFixed(1)},${y(v).toFixed(1)}`;
    pen = true;
  }
  svg.append(svgEl("path", {
    d, fill: "none", stroke: "#111827", "stroke-width": 1.2, class: "truth-line",
  }));
  svg.append(axisLabel(left - 4, top + 10, fmt(hi)));

  const box = document.createElement("div");
  box.className = "overlay-row";
  const label = document.createElement("span");
  label.className = "strip-label";
  label.textContent = opts.label;
  box.append(label, svg);
  return box;
}

export interface ProbEntry {
  name: string;
  prob: number;
  detected: boolean;
}

export const DETECTION_THRESHOLD = 0.5;

/** Ensemble probabilities as bars against the fixed decision threshold. */
export function probBars(entries: ProbEntry[], opts: ChartOptions = {}): HTMLElement {
  const width = opts.width ?? 500;
  const height = opts.height ?? 220;
  const { svg, plotW, plotH, left, top } = makeFrame(width, height, 42, 8, 22);
  svg.classList.add("prob-bars");

  const y = (v: number) => top + plotH - v * plotH;
  const band = plotW / Math.max(entries.length, 1);

  entries.forEach((entry, i) => {
    const bar = svgEl("rect", {
      x: left + i * band + band * 0.15,
      y: y(entry.prob),
      width: band * 0.7,
      height: plotH - (y(entry.prob) - top),
      fill: entry.detected ? SERIES_COLORS[2]! : "#9ca3af",
      class: "prob-bar",
    });
    bar.dataset.appliance = entry.name;
    bar.dataset.prob = String(entry.prob);
    svg.append(bar);
    const name = svgEl("text", {
      x: left + i * band + band / 2, y: top + plotH + 14,
      "text-anchor": "middle", class: "axis-label",
    });
    name.textContent = entry.name;
    const value = svgEl("text", {
      x: left + i * band + band / 2, y: y(entry.prob) - 4,
      "text-anchor": "middle", class: "axis-label",
    });
    value.textContent = entry.prob.toFixed(3);
    svg.append(name, value);
  });

  const threshold = svgEl("line", {
    x1: left, y1: y(DETECTION_THRESHOLD), x2: left + plotW, y2: y(DETECTION_THRESHOLD),
    stroke: "#dc2626", "stroke-width": 1, "stroke-dasharray": "6 3",
    class: "threshold-line",
  });
  threshold.dataset.threshold = String(DETECTION_THRESHOLD);
  svg.append(
    axisLabel(left - 4, top + 4, "1"),
    axisLabel(left - 4, y(DETECTION_THRESHOLD) + 4, "0.5"),
    axisLabel(left - 4, top + plotH, "0"),
    threshold,
  );

  const box = document.createElement("div");
  box.className = "prob-chart";
  box.append(svg);
  return box;
}

/** Label-efficiency chart: one series per method, metric against the number
 *  of training labels on a log x axis. Points carry their payload values. */
export function labelEfficiencyChart(
  rows: BenchmarkRow[],
  metric: string,
  opts: ChartOptions = {},
): HTMLElement {
  const width = opts.width ?? 640;
  const height = opts.height ?? 260;
  const { svg, plotW, plotH, left, top } = makeFrame(width, height, 48, 8, 26);
  svg.classList.add("efficiency-chart");

  const usable = rows.filter((r) => metric in r.metrics);
  const byMethod = new Map<string, BenchmarkRow[]>();
  for (const row of usable) {
    const bucket = byMethod.get(row.method_id) ?? [];
    bucket.push(row);
    byMethod.set(row.method_id, bucket);
  }

  const labels = usable.map((r) => r.labels_used);
  let logLo = Math.log10(Math.max(Math.min(...labels), 1));
  let logHi = Math.log10(Math.max(...labels));
  if (!usable.length) {
    logLo = 0;
    logHi = 1;
  } else if (logLo === logHi) {
    logLo -= 1;
    logHi += 1;
  }
  const x = (l: number) => left + ((Math.log10(Math.max(l, 1)) - logLo) / (logHi - logLo)) * plotW;
  const y = (v: number) => top + plotH - v * plotH;

  for (let p = Math.ceil(logLo); p <= Math.floor(logHi); p++) {
    const gx = x(10 ** p);
    svg.append(svgEl("line", {
      x1: gx, y1: top, x2: gx, y2: top + plotH, stroke: "#e5e7eb", "stroke-width": 0.5,
    }));
    const tick = svgEl("text", {
      x: gx, y: top + plotH + 14, "text-anchor": "middle", class: "axis-label",
    });
    tick.textContent = `1e${p}`;
    svg.append(tick);
  }
  svg.append(
    axisLabel(left - 4, top + 4, "1"),
    axisLabel(left - 4, top + plotH, "0"),
    svgEl("line", {
      x1: left, y1: top + plotH, x2: left + plotW, y2: top + plotH,
      stroke: "#9ca3af", "stroke-width": 1,
    }),
  );

  const legend = document.createElement("div");
  legend.className = "legend";
  let series = 0;
  for (const [method, methodRows] of byMethod) {
    const color = SERIES_COLORS[series % SERIES_COLORS.length]!;
    const pts = [...methodRows].sort((a, b) => a.labels_used - b.labels_used);
    if (pts.length > 1) {
      const d = pts
        .map((r, i) => `${i ? "L" : "M"}${x(r.labels_used).toFixed(1)},${y(r.metrics[metric]!).toFixed(1)}`)
        .join("");
      const line = svgEl("path", {
        d, fill: "none", stroke: color, "stroke-width": 1.2, class: "series-line",
      });
      line.dataset.method = method;
      svg.append(line);
    }
    for (const row of pts) {
      const dot = svgEl("circle", {
        cx: x(row.labels_used), cy: y(row.metrics[metric]!), r: 4,
        fill: color, class: "series-point",
      });
      dot.dataset.method = method;
      dot.dataset.x = String(row.labels_used);
      dot.dataset.y = String(row.metrics[metric]);
      const tip = svgEl("title");
      tip.textContent = `${method}: ${metric}=${row.metrics[metric]} at ${row.labels_used} labels`;
      dot.append(tip);
      svg.append(dot);
    }
    const item = document.createElement("span");
    item.className = "legend-item";
    item.innerHTML = `<i style="background:${color}"></i>${method}`;
    legend.append(item);
    series++;
  }

  const box = document.createElement("div");
  box.className = "efficiency-box";
  box.append(svg, legend);
  return box;
}

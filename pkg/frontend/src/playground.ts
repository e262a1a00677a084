/** Playground frame: walk through consumption windows, guess, then reveal
 *  what the models detected and where. */

import { deviceOverlay, lineChart, probBars, statusStrip } from "./charts.js";
import { canNavigate, LENGTH_LABELS, ViewState } from "./state.js";
import type { PredictPayload, SignaturesPayload, WindowPayload } from "./types.js";

export interface PlaygroundData {
  window: WindowPayload | null;
  predict: PredictPayload | null;
  signatures: SignaturesPayload | null;
  /** Set on a failed fetch; the previous view stays on screen under a banner. */
  error: string | null;
}

export function windowLabel(offset: number, length: number): string {
  const day = Math.floor(offset / 1440) + 1;
  const minute = offset % 1440;
  const hh = String(Math.floor(minute / 60)).padStart(2, "0");
  const mm = String(minute % 60).padStart(2, "0");
  return `day ${day}, ${hh}:${mm}`;
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

function contentOf(root: HTMLElement): HTMLElement {
  let content = root.querySelector<HTMLElement>(":scope > .playground-content");
  if (!content) {
    content = document.createElement("div");
    content.className = "playground-content";
    root.append(content);
  }
  return content;
}

export function renderPlayground(root: HTMLElement, state: ViewState, data: PlaygroundData): void {
  upsertBanner(root, data.error);
  if (data.error !== null) return; // stale view stays put under the banner
  const content = contentOf(root);
  content.replaceChildren();

  const win = data.window;
  if (!win) {
    content.append(hint("select a dataset and house to begin"));
    return;
  }

  content.append(toolbar(state, win));
  const aggregate = lineChart(win.aggregate, { color: "#2563eb" });
  aggregate.classList.add("aggregate-chart");
  content.append(aggregate);

  if (!state.revealed) {
    const gate = document.createElement("div");
    gate.className = "reveal-gate";
    const button = document.createElement("button");
    button.dataset.action = "reveal";
    button.textContent = "Reveal predictions";
    gate.append(
      hint("guess which appliances ran in this window, then"),
      button,
    );
    content.append(gate);
  } else if (state.appliances.length > 0) {
    content.append(tabs(state), tabPanel(state, win, data.predict));
  }

  if (data.signatures) content.append(signatureExpander(data.signatures));
}

function hint(text: string): HTMLElement {
  const el = document.createElement("p");
  el.className = "hint";
  el.textContent = text;
  return el;
}

function toolbar(state: ViewState, win: WindowPayload): HTMLElement {
  const bar = document.createElement("div");
  bar.className = "window-toolbar";

  const prev = document.createElement("button");
  prev.dataset.action = "prev";
  prev.textContent = "Previous";
  prev.disabled = !canNavigate(state, "prev");

  const next = document.createElement("button");
  next.dataset.action = "next";
  next.textContent = "Next";
  next.disabled = !canNavigate(state, "next");

  const position = document.createElement("span");
  position.className = "window-position";
  position.textContent =
    `${win.house_id}: ${windowLabel(win.offset, win.length)} + ${LENGTH_LABELS[state.length]}`;

  const pick = document.createElement("span");
  pick.className = "appliance-picker";
  for (const name of Object.keys(win.appliances).sort()) {
    const label = document.createElement("label");
    const box = document.createElement("input");
    box.type = "checkbox";
    box.dataset.action = "toggle-appliance";
    box.dataset.name = name;
    box.checked = state.appliances.includes(name);
    label.append(box, document.createTextNode(name));
    pick.append(label);
  }

  bar.append(prev, next, position, pick);
  return bar;
}

function tabs(state: ViewState): HTMLElement {
  const bar = document.createElement("div");
  bar.className = "tab-bar";
  const labels: Array<[ViewState["tab"], string]> = [
    ["aggregate", "Aggregate"],
    ["per_device", "Per device"],
    ["probabilities", "Model detection probabilities"],
  ];
  for (const [tab, text] of labels) {
    const button = document.createElement("button");
    button.dataset.action = "tab";
    button.dataset.tab = tab;
    button.textContent = text;
    if (state.tab === tab) button.classList.add("active");
    bar.append(button);
  }
  return bar;
}

function tabPanel(
  state: ViewState,
  win: WindowPayload,
  predict: PredictPayload | null,
): HTMLElement {
  const panel = document.createElement("div");
  panel.className = `tab-panel tab-${state.tab}`;
  const predictions = predict?.predictions ?? {};
  const selected = state.appliances.filter((name) => name in predictions);

  if (state.tab === "probabilities") {
    panel.append(probBars(selected.map((name) => ({
      name,
      prob: predictions[name]!.prob_ensemble,
      detected: predictions[name]!.detected,
    }))));
    return panel;
  }

  for (const name of selected) {
    const prediction = predictions[name]!;
    if (state.tab === "per_device") {
      const truth = win.appliances[name];
      if (truth) {
        panel.append(deviceOverlay(truth, prediction.y_hat, { label: name }));
        continue;
      }
      // house has no reference channel for this appliance: prediction only
    }
    panel.append(statusStrip(prediction.y_hat, {
      label: name,
      detected: prediction.detected,
    }));
  }
  return panel;
}

function signatureExpander(signatures: SignaturesPayload): HTMLElement {
  const details = document.createElement("details");
  details.className = "signatures";
  const summary = document.createElement("summary");
  summary.textContent = "Appliance signature examples";
  details.append(summary);
  for (const [name, values] of Object.entries(signatures.signatures)) {
    const row = document.createElement("div");
    row.className = "signature-row";
    row.dataset.appliance = name;
    const label = document.createElement("span");
    label.className = "strip-label";
    label.textContent = name;
    row.append(label, lineChart(values, { width: 420, height: 90, color: "#6b7280" }));
    details.append(row);
  }
  return details;
}

/** Typed client for the backing JSON API. The UI talks to the service
 *  exclusively through these calls; no other data enters the page. */

import type {
  BenchmarkPayload,
  DatasetList,
  ErrorEnvelope,
  HouseList,
  PredictPayload,
  SignaturesPayload,
  WindowPayload,
} from "./types.js";

const API_BASE = "/api";

export class ApiFailure extends Error {
  constructor(
    public readonly code: string,
    message: string,
    public readonly status: number,
  ) {
    super(message);
    this.name = "ApiFailure";
  }
}

async function request<T>(path: string, init?: RequestInit): Promise<T> {
  let response: Response;
  try {
    response = await fetch(`${API_BASE}${path}`, init);
  } catch (err) {
    throw new ApiFailure("network", `service unreachable: ${String(err)}`, 0);
  }
  if (!response.ok) {
    let code = "http_error";
    let message = `${response.status} ${response.statusText}`;
    try {
      const body = (await response.json()) as ErrorEnvelope;
      if (body.error) {
        code = body.error.code;
        message = body.error.message;
      }
    } catch {
      // non-JSON error body; keep the status line
    }
    throw new ApiFailure(code, message, response.status);
  }
  return response.json() as Promise<T>;
}

export function fetchDatasets(): Promise<DatasetList> {
  return request<DatasetList>("/datasets");
}

export function fetchHouses(dataset: string): Promise<HouseList> {
  return request<HouseList>(`/datasets/${encodeURIComponent(dataset)}/houses`);
}

export function fetchWindow(
  dataset: string,
  house: string,
  offset: number,
  length: number,
): Promise<WindowPayload> {
  const q = new URLSearchParams({
    dataset,
    house,
    offset: String(offset),
    length: String(length),
  });
  return request<WindowPayload>(`/window?${q.toString()}`);
}

export function postPredict(
  dataset: string,
  house: string,
  offset: number,
  length: number,
  appliances: string[],
): Promise<PredictPayload> {
  return request<PredictPayload>("/predict", {
    method: "POST",
    headers: { "Content-Type": "application/json" },
    body: JSON.stringify({ dataset, house, offset, length, appliances }),
  });
}

export function fetchBenchmark(
  dataset: string,
  task?: string | null,
  metric?: string | null,
): Promise<BenchmarkPayload> {
  const q = new URLSearchParams({ dataset });
  if (task) q.set("task", task);
  if (metric) q.set("metric", metric);
  return request<BenchmarkPayload>(`/benchmark?${q.toString()}`);
}

export function fetchSignatures(): Promise<SignaturesPayload> {
  return request<SignaturesPayload>("/signatures");
}

/** Serializes fetches per panel: each call takes a ticket, and a response
 *  is delivered only if no newer call started in the meantime. Stale
 *  responses resolve to null and must be ignored by the caller. */
export class PanelFetcher {
  private seq = 0;

  async latest<T>(fn: () => Promise<T>): Promise<T | null> {
    const ticket = ++this.seq;
    const value = await fn();
    return ticket === this.seq ? value : null;
  }
}

import { afterEach, describe, expect, it, vi } from "vitest";

import { ApiFailure, fetchWindow, PanelFetcher, postPredict } from "../src/api.js";
import errorFixture from "./fixtures/error_bad_length.json";
import windowFixture from "./fixtures/window_0.json";

afterEach(() => {
  vi.unstubAllGlobals();
});

describe("request encoding", () => {
  it("puts window parameters in the query string", async () => {
    const fetchMock = vi.fn().mockResolvedValue(
      new Response(JSON.stringify(windowFixture), { status: 200 }),
    );
    vi.stubGlobal("fetch", fetchMock);
    const payload = await fetchWindow("synthui", "synth_04", 0, 360);
    expect(fetchMock).toHaveBeenCalledWith(
      "/api/window?dataset=synthui&house=synth_04&offset=0&length=360",
      undefined,
    );
    expect(payload).toEqual(windowFixture);
  });

  it("posts predict requests as JSON", async () => {
    const fetchMock = vi.fn().mockResolvedValue(
      new Response(JSON.stringify({ predictions: {} }), { status: 200 }),
    );
    vi.stubGlobal("fetch", fetchMock);
    await postPredict("synthui", "synth_04", 720, 360, ["kettle"]);
    const [url, init] = fetchMock.mock.calls[0]!;
    expect(url).toBe("/api/predict");
    expect(JSON.parse(init.body)).toEqual({
      dataset: "synthui", house: "synth_04", offset: 720, length: 360,
      appliances: ["kettle"],
    });
  });
});

function jsonResponse(body: unknown, status: number): Response {
  return new Response(JSON.stringify(body), { status });
}

describe("error envelope", () => {
  it("surfaces the server's code and message", async () => {
    vi.stubGlobal("fetch", vi.fn().mockResolvedValue(jsonResponse(errorFixture, 416)));
    const failure = await fetchWindow("synthui", "synth_04", 0, 100).catch((e) => e);
    expect(failure).toBeInstanceOf(ApiFailure);
    expect(failure.code).toBe("bad_length");
    expect(failure.status).toBe(416);
    expect(failure.message).toContain("100");
  });

  it("falls back to the status line on a non-JSON body", async () => {
    vi.stubGlobal("fetch", vi.fn().mockResolvedValue(
      new Response("<html>oops</html>", { status: 502, statusText: "Bad Gateway" }),
    ));
    const failure = await fetchWindow("a", "b", 0, 360).catch((e) => e);
    expect(failure.code).toBe("http_error");
    expect(failure.status).toBe(502);
  });

  it("wraps a network failure", async () => {
    vi.stubGlobal("fetch", vi.fn().mockRejectedValue(new TypeError("offline")));
    const failure = await fetchWindow("a", "b", 0, 360).catch((e) => e);
    expect(failure).toBeInstanceOf(ApiFailure);
    expect(failure.code).toBe("network");
  });
});

describe("PanelFetcher", () => {
  it("delivers sequential responses normally", async () => {
    const panel = new PanelFetcher();
    expect(await panel.latest(() => Promise.resolve(1))).toBe(1);
    expect(await panel.latest(() => Promise.resolve(2))).toBe(2);
  });

  it("discards a response that was overtaken by a newer request", async () => {
    const panel = new PanelFetcher();
    let releaseFirst!: (v: string) => void;
    const first = panel.latest(
      () => new Promise<string>((resolve) => { releaseFirst = resolve; }),
    );
    const second = panel.latest(() => Promise.resolve("new"));
    expect(await second).toBe("new");
    releaseFirst("old");
    expect(await first).toBeNull(); // stale: a newer request already won
  });
});

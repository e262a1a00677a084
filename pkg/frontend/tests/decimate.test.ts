import { describe, expect, it } from "vitest";

import { decimate, nearestIndex } from "../src/decimate.js";

function series(n: number, fn: (i: number) => number): number[] {
  return Array.from({ length: n }, (_, i) => fn(i));
}

describe("decimate", () => {
  it("keeps every index when the trace fits the budget", () => {
    const values = series(2000, (i) => Math.sin(i / 50));
    expect(decimate(values)).toEqual(values.map((_, i) => i));
  });

  it("stays within the point budget above it", () => {
    const values = series(86400, (i) => Math.sin(i / 50));
    const idx = decimate(values);
    expect(idx.length).toBeLessThanOrEqual(2000);
    expect(idx.length).toBeGreaterThan(1000);
  });

  it("returns strictly increasing indices into the original array", () => {
    const values = series(10000, (i) => (i * 7919) % 257);
    const idx = decimate(values);
    for (let i = 1; i < idx.length; i++) {
      expect(idx[i]!).toBeGreaterThan(idx[i - 1]!);
    }
    expect(idx[0]!).toBeGreaterThanOrEqual(0);
    expect(idx[idx.length - 1]!).toBeLessThan(values.length);
  });

  it("preserves the global extremes, the point of min-max buckets", () => {
    const values = series(50000, (i) => Math.sin(i / 700) * 100);
    values[31415] = 5000; // lone spike must survive decimation
    values[27182] = -5000;
    const idx = decimate(values);
    expect(idx).toContain(31415);
    expect(idx).toContain(27182);
  });

  it("keeps a placeholder index for all-null stretches so gaps stay visible", () => {
    const values: (number | null)[] = series(10000, (i) => i % 13);
    for (let i = 4000; i < 6000; i++) values[i] = null;
    const idx = decimate(values);
    const inGap = idx.filter((i) => i >= 4000 && i < 6000);
    expect(inGap.length).toBeGreaterThan(0);
    expect(idx.length).toBeLessThanOrEqual(2000);
  });

  it("honors a custom budget", () => {
    const values = series(1000, (i) => i);
    expect(decimate(values, 100).length).toBeLessThanOrEqual(100);
  });
});

describe("nearestIndex", () => {
  it("maps pixel positions back to sample indices exactly at the ends", () => {
    expect(nearestIndex(1440, 900, 0)).toBe(0);
    expect(nearestIndex(1440, 900, 900)).toBe(1439);
  });

  it("clamps out-of-plot positions", () => {
    expect(nearestIndex(100, 900, -50)).toBe(0);
    expect(nearestIndex(100, 900, 2000)).toBe(99);
  });

  it("rounds to the closest sample", () => {
    // 10 samples over 900px: pixel 100 sits exactly at sample 1
    expect(nearestIndex(10, 900, 100)).toBe(1);
    expect(nearestIndex(10, 900, 130)).toBe(1);
    expect(nearestIndex(10, 900, 170)).toBe(2);
  });
});

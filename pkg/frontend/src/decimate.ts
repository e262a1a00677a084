/** Min-max decimation for display only.
 *
 * Traces longer than the point budget are reduced by keeping, per bucket,
 * the indices of the smallest and largest sample, so peaks and troughs
 * survive. The returned indices point back into the original array;
 * tooltips keep reading exact values from the full payload.
 */

export const MAX_POINTS = 2000;

export function decimate(values: (number | null)[], maxPoints: number = MAX_POINTS): number[] {
  const n = values.length;
  if (n <= maxPoints) {
    return Array.from({ length: n }, (_, i) => i);
  }
  const buckets = Math.floor(maxPoints / 2);
  const out: number[] = [];
  for (let b = 0; b < buckets; b++) {
    const start = Math.floor((b * n) / buckets);
    const end = Math.floor(((b + 1) * n) / buckets);
    let minIdx = -1;
    let maxIdx = -1;
    for (let i = start; i < end; i++) {
      const v = values[i];
      if (v === null || v === undefined) continue;
      if (minIdx === -1 || v < (values[minIdx] as number)) minIdx = i;
      if (maxIdx === -1 || v > (values[maxIdx] as number)) maxIdx = i;
    }
    if (minIdx === -1) {
      out.push(start); // all-null bucket: keep one index so the gap shows
    } else if (minIdx === maxIdx) {
      out.push(minIdx);
    } else {
      out.push(Math.min(minIdx, maxIdx), Math.max(minIdx, maxIdx));
    }
  }
  return out;
}

/** Map a pixel position back to the nearest sample index of the full trace. */
export function nearestIndex(n: number, width: number, xPixel: number): number {
  if (n === 0) return 0;
  const i = Math.round((xPixel / width) * (n - 1));
  return Math.max(0, Math.min(n - 1, i));
}

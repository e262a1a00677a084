/** Shareable URLs: (dataset, house, length, offset) round-trip through the
 *  query string so a view survives reload and can be pasted elsewhere. */

import { isWindowLength, ViewState } from "./state.js";

export interface UrlParams {
  dataset: string;
  house: string;
  length: number;
  offset: number;
}

export function encodeState(state: ViewState): string {
  const params = new URLSearchParams();
  if (state.dataset) params.set("dataset", state.dataset);
  if (state.house) params.set("house", state.house);
  params.set("length", String(state.length));
  params.set("offset", String(state.offset));
  return `?${params.toString()}`;
}

/** Parse the query string, dropping anything malformed. The offset is kept
 *  only when it is a non-negative multiple of the parsed length; range
 *  clamping against the house's total length happens once that is known. */
export function decodeState(search: string): Partial<UrlParams> {
  const params = new URLSearchParams(search);
  const out: Partial<UrlParams> = {};

  const dataset = params.get("dataset");
  if (dataset) out.dataset = dataset;
  const house = params.get("house");
  if (house) out.house = house;

  const length = Number(params.get("length"));
  if (isWindowLength(length)) {
    out.length = length;
    const offset = Number(params.get("offset"));
    if (Number.isInteger(offset) && offset >= 0 && offset % length === 0) {
      out.offset = offset;
    }
  }
  return out;
}

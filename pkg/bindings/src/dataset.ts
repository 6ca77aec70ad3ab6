/**
 * Weighted-set dataset files.
 *
 * Text format, one line per set:
 *
 *     #universe <n>
 *     #bounds k:w k:w ...     (optional, per-element weight caps)
 *     k:w k:w ...
 *
 * Weights are written with shortest round-trip precision, which both
 * JavaScript and the Python reader parse back to the identical f64.
 */

import { writeFileSync } from "node:fs";

import { FormatError } from "./errors.js";

export interface WeightedSetData {
  /** Strictly increasing element ids, all below the universe size. */
  indices: Uint32Array;
  /** Positive finite weights aligned with indices. */
  weights: Float64Array;
}

export interface Dataset {
  universe: number;
  sets: WeightedSetData[];
  /** Per-element weight caps; required by the rejection sketcher. */
  bounds?: Map<number, number>;
}

export type SetEntries = Record<number, number> | Array<[number, number]>;

/**
 * Build one weighted set from an id -> weight mapping.
 *
 * Zero weights are dropped, ids are sorted, and duplicates or out-of-range
 * ids are rejected, mirroring the core constructor.
 */
export function makeSet(universe: number, entries: SetEntries): WeightedSetData {
  const pairs: Array<[number, number]> = Array.isArray(entries)
    ? entries.map(([k, w]) => [k, w])
    : Object.entries(entries).map(([k, w]) => [Number(k), w]);
  const kept = pairs.filter(([, w]) => w !== 0);
  kept.sort((a, b) => a[0] - b[0]);
  const indices = new Uint32Array(kept.length);
  const weights = new Float64Array(kept.length);
  for (let i = 0; i < kept.length; i++) {
    const [k, w] = kept[i]!;
    if (!Number.isInteger(k) || k < 0 || k >= universe) {
      throw new FormatError(`element ${k} outside universe of size ${universe}`);
    }
    if (i > 0 && indices[i - 1]! === k) {
      throw new FormatError(`duplicate element ${k}`);
    }
    if (!Number.isFinite(w) || w < 0) {
      throw new FormatError(`bad weight ${w} for element ${k}`);
    }
    indices[i] = k;
    weights[i] = w;
  }
  return { indices, weights };
}

/** Elementwise max over all sets, the canonical bounds for shared layouts. */
export function elementwiseMaxBounds(sets: WeightedSetData[]): Map<number, number> {
  const bounds = new Map<number, number>();
  for (const s of sets) {
    for (let i = 0; i < s.indices.length; i++) {
      const k = s.indices[i]!;
      const w = s.weights[i]!;
      const prev = bounds.get(k);
      if (prev === undefined || w > prev) {
        bounds.set(k, w);
      }
    }
  }
  return bounds;
}

function formatWeight(w: number): string {
  // Integral doubles print as "2" here but as "2.0" from Python; both parse
  // to the same f64, and the CLI consumes what we write, so only parse
  // fidelity matters.
  return String(w);
}

/** Serialize a dataset to the CLI text format. */
export function formatDataset(dataset: Dataset): string {
  const lines: string[] = [`#universe ${dataset.universe}`];
  if (dataset.bounds !== undefined) {
    const sorted = [...dataset.bounds.entries()].sort((a, b) => a[0] - b[0]);
    lines.push("#bounds " + sorted.map(([k, w]) => `${k}:${formatWeight(w)}`).join(" "));
  }
  for (const s of dataset.sets) {
    const tokens: string[] = [];
    for (let i = 0; i < s.indices.length; i++) {
      tokens.push(`${s.indices[i]}:${formatWeight(s.weights[i]!)}`);
    }
    lines.push(tokens.join(" "));
  }
  return lines.join("\n") + "\n";
}

export function writeDatasetFile(path: string, dataset: Dataset): void {
  writeFileSync(path, formatDataset(dataset), { encoding: "ascii" });
}

function parsePairs(tokens: string[], lineno: number): Array<[number, number]> {
  return tokens.map((tok) => {
    const sep = tok.indexOf(":");
    if (sep <= 0) {
      throw new FormatError(`line ${lineno}: bad token ${JSON.stringify(tok)}`);
    }
    const k = Number(tok.slice(0, sep));
    const w = Number(tok.slice(sep + 1));
    if (!Number.isInteger(k) || Number.isNaN(w)) {
      throw new FormatError(`line ${lineno}: bad token ${JSON.stringify(tok)}`);
    }
    return [k, w];
  });
}

/** Parse the CLI text format back into a dataset. */
export function parseDataset(text: string): Dataset {
  const lines = text.split("\n");
  if (lines.length > 0 && lines[lines.length - 1] === "") {
    lines.pop();
  }
  const header = lines[0];
  if (header === undefined || !header.startsWith("#universe ")) {
    throw new FormatError("missing #universe header");
  }
  const universe = Number(header.split(" ")[1]);
  if (!Number.isInteger(universe) || universe < 1) {
    throw new FormatError("bad #universe header");
  }
  let bodyStart = 1;
  let bounds: Map<number, number> | undefined;
  if (lines.length > 1 && lines[1]!.startsWith("#bounds")) {
    bounds = new Map(parsePairs(lines[1]!.split(/\s+/).slice(1), 2));
    bodyStart = 2;
  }
  const sets: WeightedSetData[] = [];
  for (let i = bodyStart; i < lines.length; i++) {
    const tokens = lines[i]!.split(/\s+/).filter((t) => t.length > 0);
    sets.push(makeSet(universe, parsePairs(tokens, i + 1)));
  }
  if (sets.length === 0) {
    throw new FormatError("dataset holds no sets");
  }
  const out: Dataset = { universe, sets };
  if (bounds !== undefined) {
    out.bounds = bounds;
  }
  return out;
}

/**
 * Binary fingerprint file parser.
 *
 * Layout (little-endian throughout):
 *
 *     "WMHF"  u8 version (1)  u32 count
 *     per fingerprint: u8 algorithm tag, u32 D, u64 seed, then D records
 *
 * Record shape depends on the algorithm's code variant: index+payload
 * variants interleave (u32 k, u64|f64 v) per hash position, index-only is a
 * bare u32 array, value-only a bare u64 array. Parsing is strict: unknown
 * tags, truncation, or trailing bytes all throw.
 */

import { FormatError } from "./errors.js";

export const ALGORITHM_NAMES = [
  "minhash",
  "haveliwala",
  "haeupler",
  "gollapudi-int",
  "cws",
  "icws",
  "0bit",
  "ccws",
  "pcws",
  "i2cws",
  "gollapudi-threshold",
  "chum",
  "shrivastava",
] as const;

export type AlgorithmName = (typeof ALGORITHM_NAMES)[number];

/** Lane id marking a hash position that sampled no element. */
export const SENTINEL_ELEMENT = 0xffffffff;

export type CodeVariant =
  | "min-value"   // u64 payload, no index
  | "index-sub"   // u32 index + u64 subelement payload
  | "index-only"  // u32 index
  | "index-y"     // u32 index + f64 payload
  | "step-count"; // u64 payload, no index

const VARIANTS: Record<AlgorithmName, CodeVariant> = {
  minhash: "min-value",
  haveliwala: "index-sub",
  haeupler: "index-sub",
  "gollapudi-int": "index-sub",
  cws: "index-y",
  icws: "index-y",
  "0bit": "index-only",
  ccws: "index-y",
  pcws: "index-y",
  i2cws: "index-y",
  "gollapudi-threshold": "index-only",
  chum: "index-only",
  shrivastava: "step-count",
};

export function variantOf(algo: AlgorithmName): CodeVariant {
  return VARIANTS[algo];
}

export function algorithmTag(algo: AlgorithmName): number {
  const tag = ALGORITHM_NAMES.indexOf(algo) + 1;
  if (tag === 0) {
    throw new FormatError(`unknown algorithm ${JSON.stringify(algo)}`);
  }
  return tag;
}

export interface Fingerprint {
  algo: AlgorithmName;
  numHashes: number;
  /** Full 64-bit seed as written by the CLI. */
  seed: bigint;
  /** Sampled element per hash position; absent for value-only variants. */
  ks?: Uint32Array;
  /** Payload per hash position; f64 for index-y, u64 bits otherwise. */
  vals?: Float64Array | BigUint64Array;
}

const FILE_MAGIC = 0x574d4846; // "WMHF" big-endian read of the 4 bytes
const FILE_VERSION = 1;

function recordSize(variant: CodeVariant): number {
  switch (variant) {
    case "index-only":
      return 4;
    case "min-value":
    case "step-count":
      return 8;
    case "index-sub":
    case "index-y":
      return 12;
  }
}

function parseOne(view: DataView, offset: number): { fp: Fingerprint; next: number } {
  if (view.byteLength - offset < 13) {
    throw new FormatError("truncated fingerprint header");
  }
  const tag = view.getUint8(offset);
  const numHashes = view.getUint32(offset + 1, true);
  const seed = view.getBigUint64(offset + 5, true);
  offset += 13;
  const algo = ALGORITHM_NAMES[tag - 1];
  if (tag < 1 || algo === undefined) {
    throw new FormatError(`unknown algorithm tag ${tag}`);
  }
  const variant = VARIANTS[algo];
  const nbytes = recordSize(variant) * numHashes;
  if (view.byteLength - offset < nbytes) {
    throw new FormatError("truncated code block");
  }
  const fp: Fingerprint = { algo, numHashes, seed };
  if (variant === "index-only") {
    const ks = new Uint32Array(numHashes);
    for (let i = 0; i < numHashes; i++) {
      ks[i] = view.getUint32(offset + 4 * i, true);
    }
    fp.ks = ks;
  } else if (variant === "min-value" || variant === "step-count") {
    const vals = new BigUint64Array(numHashes);
    for (let i = 0; i < numHashes; i++) {
      vals[i] = view.getBigUint64(offset + 8 * i, true);
    }
    fp.vals = vals;
  } else {
    const ks = new Uint32Array(numHashes);
    for (let i = 0; i < numHashes; i++) {
      ks[i] = view.getUint32(offset + 12 * i, true);
    }
    fp.ks = ks;
    if (variant === "index-sub") {
      const vals = new BigUint64Array(numHashes);
      for (let i = 0; i < numHashes; i++) {
        vals[i] = view.getBigUint64(offset + 12 * i + 4, true);
      }
      fp.vals = vals;
    } else {
      const vals = new Float64Array(numHashes);
      for (let i = 0; i < numHashes; i++) {
        vals[i] = view.getFloat64(offset + 12 * i + 4, true);
      }
      fp.vals = vals;
    }
  }
  return { fp, next: offset + nbytes };
}

/** Parse a whole fingerprint file. */
export function parseFingerprintFile(buf: Uint8Array, expectedAlgo?: AlgorithmName): Fingerprint[] {
  const view = new DataView(buf.buffer, buf.byteOffset, buf.byteLength);
  if (buf.byteLength < 9 || view.getUint32(0, false) !== FILE_MAGIC) {
    throw new FormatError("not a fingerprint file");
  }
  const version = view.getUint8(4);
  if (version !== FILE_VERSION) {
    throw new FormatError(`unsupported fingerprint file version ${version}`);
  }
  const count = view.getUint32(5, true);
  let offset = 9;
  const out: Fingerprint[] = [];
  for (let i = 0; i < count; i++) {
    const { fp, next } = parseOne(view, offset);
    if (expectedAlgo !== undefined && fp.algo !== expectedAlgo) {
      throw new FormatError(`expected ${expectedAlgo}, stream holds ${fp.algo}`);
    }
    out.push(fp);
    offset = next;
  }
  if (offset !== buf.byteLength) {
    throw new FormatError("trailing bytes after last fingerprint");
  }
  return out;
}

/** Bitwise fingerprint equality, including NaN payloads and -0.0 vs 0.0. */
export function fingerprintsEqual(a: Fingerprint, b: Fingerprint): boolean {
  if (a.algo !== b.algo || a.numHashes !== b.numHashes || a.seed !== b.seed) {
    return false;
  }
  if ((a.ks === undefined) !== (b.ks === undefined)) {
    return false;
  }
  if (a.ks !== undefined && b.ks !== undefined) {
    for (let i = 0; i < a.ks.length; i++) {
      if (a.ks[i] !== b.ks[i]) {
        return false;
      }
    }
  }
  if ((a.vals === undefined) !== (b.vals === undefined)) {
    return false;
  }
  if (a.vals !== undefined && b.vals !== undefined) {
    const abits = asBits(a.vals);
    const bbits = asBits(b.vals);
    for (let i = 0; i < abits.length; i++) {
      if (abits[i] !== bbits[i]) {
        return false;
      }
    }
  }
  return true;
}

function asBits(vals: Float64Array | BigUint64Array): BigUint64Array {
  if (vals instanceof BigUint64Array) {
    return vals;
  }
  return new BigUint64Array(vals.buffer, vals.byteOffset, vals.length);
}

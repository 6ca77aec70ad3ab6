/**
 * Sketch and estimate operations, file-brokered through the CLI.
 *
 * Each call stages its inputs in a fresh temporary directory, invokes the
 * subcommand, parses the result, and removes the directory again. Outputs
 * are therefore bit-identical to what the CLI writes for the same inputs;
 * no numerics happen on this side.
 */

import { mkdtempSync, readFileSync, rmSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";

import { CliOptions, runCli } from "./cli.js";
import { Dataset, writeDatasetFile } from "./dataset.js";
import { AlgorithmName, Fingerprint, parseFingerprintFile } from "./fingerprint.js";

export interface SketchOptions extends CliOptions {
  /** Integer quantization scale for the subelement-expansion family. */
  scaleC?: number;
}

function withWorkDir<T>(fn: (dir: string) => T): T {
  const dir = mkdtempSync(join(tmpdir(), "wmhash-"));
  try {
    return fn(dir);
  } finally {
    rmSync(dir, { recursive: true, force: true });
  }
}

function sketchArgs(algo: string, d: number, seed: number,
                    dataPath: string, outPath: string,
                    options?: SketchOptions): string[] {
  const args = ["sketch", "--algo", algo, "--d", String(d), "--seed", String(seed)];
  if (options?.scaleC !== undefined) {
    args.push("--scale-c", String(options.scaleC));
  }
  args.push(dataPath, outPath);
  return args;
}

/**
 * Fingerprint every set of a dataset; the raw bytes of the CLI's output
 * file, for byte-level comparisons.
 */
export function boundSketchRaw(dataset: Dataset, algo: string, d: number,
                               seed: number, options?: SketchOptions): Uint8Array {
  return withWorkDir((dir) => {
    const dataPath = join(dir, "data.txt");
    const outPath = join(dir, "codes.fp");
    writeDatasetFile(dataPath, dataset);
    runCli(sketchArgs(algo, d, seed, dataPath, outPath, options), options);
    return new Uint8Array(readFileSync(outPath));
  });
}

/** Fingerprint every set of a dataset and parse the code arrays. */
export function boundSketch(dataset: Dataset, algo: AlgorithmName, d: number,
                            seed: number, options?: SketchOptions): Fingerprint[] {
  return parseFingerprintFile(boundSketchRaw(dataset, algo, d, seed, options), algo);
}

export interface PairEstimate {
  i: number;
  j: number;
  /** Collision fraction of the two fingerprints. */
  estimate: number;
  /** Exact generalized Jaccard similarity, computed by the core. */
  truth: number;
  sqError: number;
}

/** Parse the estimate subcommand's CSV output (CRLF line endings). */
export function parsePairCsv(text: string): PairEstimate[] {
  const lines = text.trim().split(/\r?\n/);
  if (lines[0] !== "i,j,estimate,truth,sq_error") {
    throw new Error(`unexpected estimate CSV header: ${lines[0]}`);
  }
  return lines.slice(1).map((line) => {
    const [i, j, estimate, truth, sqError] = line.split(",").map(Number);
    return { i: i!, j: j!, estimate: estimate!, truth: truth!, sqError: sqError! };
  });
}

export interface EstimateOptions extends SketchOptions {
  /** Cap on the number of scored pairs. */
  maxPairs?: number;
}

/**
 * Sketch a dataset and score set pairs against the exact similarity.
 *
 * Pair selection follows the CLI rule: all unordered pairs for small
 * datasets, a seeded sample beyond that.
 */
export function boundEstimate(dataset: Dataset, algo: AlgorithmName, d: number,
                              seed: number, options?: EstimateOptions): PairEstimate[] {
  return withWorkDir((dir) => {
    const dataPath = join(dir, "data.txt");
    const fpPath = join(dir, "codes.fp");
    const csvPath = join(dir, "pairs.csv");
    writeDatasetFile(dataPath, dataset);
    runCli(sketchArgs(algo, d, seed, dataPath, fpPath, options), options);
    const args = ["estimate"];
    if (options?.maxPairs !== undefined) {
      args.push("--pairs", String(options.maxPairs));
    }
    args.push(dataPath, fpPath, csvPath);
    runCli(args, options);
    return parsePairCsv(readFileSync(csvPath, "utf8"));
  });
}

/**
 * Exact pairwise similarities from the core oracle.
 *
 * Backed by the estimate subcommand's truth column (a one-hash throwaway
 * sketch satisfies its input contract), so the numbers come from the same
 * implementation the benchmarks use.
 */
export function boundOracle(dataset: Dataset, seed = 0,
                            options?: EstimateOptions): Map<string, number> {
  const rows = boundEstimate(dataset, "minhash", 1, seed, options);
  const out = new Map<string, number>();
  for (const row of rows) {
    out.set(`${row.i},${row.j}`, row.truth);
  }
  return out;
}

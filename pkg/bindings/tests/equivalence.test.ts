/**
 * Binding output must equal CLI output bitwise, per algorithm, on the
 * shared 10-set fixture. The CLI side writes the dataset and fingerprints
 * itself; the binding side goes through its own staging path. Equality is
 * checked on the raw file bytes and again on the parsed arrays.
 */

import { execFileSync } from "node:child_process";
import { mkdtempSync, readFileSync, rmSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";

import { afterAll, describe, expect, it } from "vitest";

import { writeDatasetFile } from "../src/dataset.js";
import {
  ALGORITHM_NAMES,
  fingerprintsEqual,
  parseFingerprintFile,
} from "../src/fingerprint.js";
import { boundSketch, boundSketchRaw } from "../src/sketch.js";
import { fixtureDataset } from "./fixture.js";

const D = 32;
const SEED = 11;
const PYTHON = process.env["WMHASH_PYTHON"] ?? "python3";

const work = mkdtempSync(join(tmpdir(), "wmhash-equiv-"));
const dataset = fixtureDataset();
const dataPath = join(work, "fixture.txt");
writeDatasetFile(dataPath, dataset);

afterAll(() => {
  rmSync(work, { recursive: true, force: true });
});

function cliSketchBytes(algo: string): Uint8Array {
  const outPath = join(work, `${algo}.fp`);
  execFileSync(PYTHON, [
    "-m", "wmhash", "sketch",
    "--algo", algo, "--d", String(D), "--seed", String(SEED),
    dataPath, outPath,
  ]);
  return new Uint8Array(readFileSync(outPath));
}

describe("binding equals CLI bitwise", () => {
  it.each([...ALGORITHM_NAMES])("%s", (algo) => {
    const cliBytes = cliSketchBytes(algo);
    const bindingBytes = boundSketchRaw(dataset, algo, D, SEED);
    expect(Buffer.from(bindingBytes).equals(Buffer.from(cliBytes))).toBe(true);

    const cliFps = parseFingerprintFile(cliBytes, algo);
    const bindingFps = boundSketch(dataset, algo, D, SEED);
    expect(bindingFps.length).toBe(dataset.sets.length);
    expect(cliFps.length).toBe(dataset.sets.length);
    for (let i = 0; i < cliFps.length; i++) {
      expect(fingerprintsEqual(bindingFps[i]!, cliFps[i]!)).toBe(true);
    }
  });

  it("is deterministic across binding invocations", () => {
    const one = boundSketchRaw(dataset, "icws", D, SEED);
    const two = boundSketchRaw(dataset, "icws", D, SEED);
    expect(Buffer.from(one).equals(Buffer.from(two))).toBe(true);
  });

  it("seed changes the bytes", () => {
    const one = boundSketchRaw(dataset, "icws", D, SEED);
    const two = boundSketchRaw(dataset, "icws", D, SEED + 1);
    expect(Buffer.from(one).equals(Buffer.from(two))).toBe(false);
  });
});

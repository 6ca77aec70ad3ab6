/**
 * Subprocess transport to the wmhash CLI.
 *
 * The binding never reimplements sketching logic; every operation shells out
 * to the installed Python package (`python3 -m wmhash`) and exchanges data
 * through files. One source of truth for the numerics lives on the other
 * side of this boundary.
 */

import { spawnSync } from "node:child_process";

import { CliError, translateCliFailure } from "./errors.js";

export interface CliOptions {
  /** Interpreter used to start the CLI. Default: $WMHASH_PYTHON or python3. */
  python?: string;
  /** Kill the subprocess after this many milliseconds. */
  timeoutMs?: number;
}

export interface CliResult {
  stdout: string;
  stderr: string;
}

function interpreter(options?: CliOptions): string {
  return options?.python ?? process.env["WMHASH_PYTHON"] ?? "python3";
}

/**
 * Run one wmhash subcommand and return its captured output.
 *
 * Throws a typed {@link CliError} subclass when the CLI exits non-zero.
 */
export function runCli(args: string[], options?: CliOptions): CliResult {
  const proc = spawnSync(interpreter(options), ["-m", "wmhash", ...args], {
    encoding: "utf8",
    timeout: options?.timeoutMs,
    maxBuffer: 64 * 1024 * 1024,
  });
  if (proc.error !== undefined) {
    throw new CliError(`failed to start wmhash: ${proc.error.message}`, -1, "");
  }
  if (proc.status !== 0) {
    throw translateCliFailure(proc.status ?? -1, proc.stderr);
  }
  return { stdout: proc.stdout, stderr: proc.stderr };
}

/**
 * Error surface of the bindings.
 *
 * The CLI reports domain failures as one `error: <message>` line on stderr
 * with exit code 1. The binding re-raises those as typed errors so callers
 * can branch without string matching; anything unrecognized stays a plain
 * {@link CliError} with the raw stderr attached.
 */

export class CliError extends Error {
  readonly exitCode: number;
  readonly stderr: string;

  constructor(message: string, exitCode: number, stderr: string) {
    super(message);
    this.name = "CliError";
    this.exitCode = exitCode;
    this.stderr = stderr;
  }
}

export class UnknownAlgorithmError extends CliError {
  constructor(message: string, exitCode: number, stderr: string) {
    super(message, exitCode, stderr);
    this.name = "UnknownAlgorithmError";
  }
}

export class EmptySetError extends CliError {
  constructor(message: string, exitCode: number, stderr: string) {
    super(message, exitCode, stderr);
    this.name = "EmptySetError";
  }
}

export class MissingBoundsError extends CliError {
  constructor(message: string, exitCode: number, stderr: string) {
    super(message, exitCode, stderr);
    this.name = "MissingBoundsError";
  }
}

export class BoundExceededError extends CliError {
  constructor(message: string, exitCode: number, stderr: string) {
    super(message, exitCode, stderr);
    this.name = "BoundExceededError";
  }
}

/** Raised by the binding's own parsers, not by the CLI. */
export class FormatError extends Error {
  constructor(message: string) {
    super(message);
    this.name = "FormatError";
  }
}

/** Map a failed CLI invocation onto the typed error hierarchy. */
export function translateCliFailure(exitCode: number, stderr: string): CliError {
  const line = stderr.trim().split("\n").pop() ?? "";
  const message = line.startsWith("error: ") ? line.slice("error: ".length) : line;
  if (message.includes("unknown algorithm")) {
    return new UnknownAlgorithmError(message, exitCode, stderr);
  }
  if (message.includes("empty set")) {
    return new EmptySetError(message, exitCode, stderr);
  }
  if (message.includes("#bounds")) {
    return new MissingBoundsError(message, exitCode, stderr);
  }
  if (message.includes("layout bound")) {
    return new BoundExceededError(message, exitCode, stderr);
  }
  return new CliError(message || `wmhash exited with code ${exitCode}`, exitCode, stderr);
}

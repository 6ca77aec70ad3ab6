export {
  CliError,
  UnknownAlgorithmError,
  EmptySetError,
  MissingBoundsError,
  BoundExceededError,
  FormatError,
} from "./errors.js";
export { runCli } from "./cli.js";
export type { CliOptions, CliResult } from "./cli.js";
export {
  makeSet,
  elementwiseMaxBounds,
  formatDataset,
  writeDatasetFile,
  parseDataset,
} from "./dataset.js";
export type { Dataset, WeightedSetData, SetEntries } from "./dataset.js";
export {
  ALGORITHM_NAMES,
  SENTINEL_ELEMENT,
  algorithmTag,
  variantOf,
  parseFingerprintFile,
  fingerprintsEqual,
} from "./fingerprint.js";
export type { AlgorithmName, CodeVariant, Fingerprint } from "./fingerprint.js";
export {
  boundSketch,
  boundSketchRaw,
  boundEstimate,
  boundOracle,
  parsePairCsv,
} from "./sketch.js";
export type { SketchOptions, EstimateOptions, PairEstimate } from "./sketch.js";

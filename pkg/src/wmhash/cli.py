"""Command-line harness: gen, sketch, estimate, bench.

Every subcommand is deterministic from its flags: all randomness flows from
--seed through keyed variate streams, so reruns produce byte-identical
non-timing outputs. Exit code 0 means the subcommand completed (benchmark
timeout rows included); domain and I/O failures print one error line and
exit 1; flag misuse exits 2 via argparse.
"""

from __future__ import annotations

import argparse
import os
import sys

from .algorithms import sketch
from .core import (
    ALGORITHM_NAMES,
    DEFAULT_QUANT_SCALE,
    LengthMismatch,
    MissingBounds,
    SketchConfig,
    SketchError,
    read_dataset,
    read_fingerprint_file,
    write_dataset,
    write_fingerprint_file,
)
from .datagen import GenParams, generate, stats
from .estimate import (
    collision_similarity,
    run_benchmark,
    select_pairs,
    write_aggregate_csv,
    write_mse_csv,
    write_pair_csv,
    write_runtime_csv,
)
from .oracle import generalized_jaccard
from .sketch_misc import build_layout, layout_from_bounds

__all__ = ["build_parser", "main"]


def _cmd_gen(args) -> int:
    params = GenParams(num_docs=args.docs, num_features=args.features,
                       density=args.density, exponent=args.exponent,
                       scale=args.scale, seed=args.seed)
    dataset = generate(params)
    layout = build_layout(dataset)
    write_dataset(args.out, dataset, bounds=layout.to_bounds())
    density, mean_w, std_w = stats(dataset)
    print(f"wrote {args.out}: docs={len(dataset)} features={args.features} "
          f"density={density:.6g} mean_weight={mean_w:.6g} std_weight={std_w:.6g}")
    return 0


def _cmd_sketch(args) -> int:
    sets, bounds = read_dataset(args.data)
    layout = None
    if args.algo == "shrivastava":
        if bounds is None:
            raise MissingBounds(
                f"{args.data} has no #bounds section; shrivastava needs one")
        layout = layout_from_bounds(bounds)
    cfg = SketchConfig(num_hashes=args.d, seed=args.seed,
                       quant_scale=args.scale_c)
    fingerprints = []
    for i, s in enumerate(sets):
        try:
            fingerprints.append(sketch(args.algo, s, cfg, layout))
        except SketchError as err:
            raise type(err)(f"set {i}: {err}") from err
    write_fingerprint_file(args.out, fingerprints)
    print(f"wrote {args.out}: {len(fingerprints)} fingerprints "
          f"algo={args.algo} D={args.d} seed={args.seed}")
    return 0


def _cmd_estimate(args) -> int:
    sets, _ = read_dataset(args.data)
    fingerprints = read_fingerprint_file(args.fingerprints)
    if len(fingerprints) != len(sets):
        raise LengthMismatch(
            f"{len(fingerprints)} fingerprints for {len(sets)} sets")
    pairs = select_pairs(len(sets), fingerprints[0].seed)
    if args.pairs is not None:
        pairs = pairs[:args.pairs]
    estimates = [collision_similarity(fingerprints[i], fingerprints[j])
                 for i, j in pairs]
    truths = [generalized_jaccard(sets[i], sets[j]) for i, j in pairs]
    write_pair_csv(args.out, pairs, estimates, truths)
    print(f"wrote {args.out}: {len(pairs)} pairs")
    return 0


def _cmd_bench(args) -> int:
    sets, _ = read_dataset(args.data)
    algos = args.algos.split(",") if args.algos else list(ALGORITHM_NAMES)
    d_list = [int(tok) for tok in args.d_list.split(",")]
    report = run_benchmark(sets, algos, d_list, repetitions=args.reps,
                           seed=args.seed, time_budget=args.budget,
                           threads=args.threads)
    os.makedirs(args.out_dir, exist_ok=True)
    mse_path = os.path.join(args.out_dir, "mse.csv")
    runtime_path = os.path.join(args.out_dir, "runtime.csv")
    agg_path = os.path.join(args.out_dir, "mse_agg.csv")
    write_mse_csv(mse_path, report)
    write_runtime_csv(runtime_path, report)
    write_aggregate_csv(agg_path, report)
    timeouts = sum(1 for r in report.rows if r.status == "timeout")
    print(f"wrote {mse_path}, {runtime_path}, {agg_path}: "
          f"{len(report.rows)} rows over {report.num_pairs} pairs, "
          f"{timeouts} timeouts")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wmhash",
        description="weighted minhash sketching and benchmarking")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="generate a synthetic power-law dataset")
    gen.add_argument("--docs", type=int, required=True)
    gen.add_argument("--features", type=int, required=True)
    gen.add_argument("--density", type=float, required=True)
    gen.add_argument("--exponent", type=float, default=3.0)
    gen.add_argument("--scale", type=float, required=True)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("out", help="dataset file to write")
    gen.set_defaults(func=_cmd_gen)

    sk = sub.add_parser("sketch", help="fingerprint every set of a dataset")
    sk.add_argument("--algo", required=True,
                    help=f"one of: {', '.join(ALGORITHM_NAMES)}")
    sk.add_argument("--d", type=int, required=True, help="hashes per fingerprint")
    sk.add_argument("--seed", type=int, default=0)
    sk.add_argument("--scale-c", type=int, default=DEFAULT_QUANT_SCALE,
                    help="integer quantization scale for the subelement family")
    sk.add_argument("data", help="dataset file")
    sk.add_argument("out", help="fingerprint file to write")
    sk.set_defaults(func=_cmd_sketch)

    est = sub.add_parser("estimate",
                         help="pairwise collision estimates vs the oracle")
    est.add_argument("--pairs", type=int, default=None,
                     help="cap on the number of pairs (default: standard rule)")
    est.add_argument("data", help="dataset file")
    est.add_argument("fingerprints", help="fingerprint file")
    est.add_argument("out", help="CSV to write")
    est.set_defaults(func=_cmd_estimate)

    bench = sub.add_parser("bench", help="MSE/runtime sweep over algorithms and D")
    bench.add_argument("--algos", default=None,
                       help="comma-separated algorithm names (default: all)")
    bench.add_argument("--d-list", default="10,20,50,100,120,150,200")
    bench.add_argument("--reps", type=int, default=10)
    bench.add_argument("--seed", type=int, default=0)
    bench.add_argument("--threads", type=int, default=1)
    bench.add_argument("--budget", type=float, default=600.0,
                       help="sketching seconds allowed per (algo, D)")
    bench.add_argument("--out-dir", default=".")
    bench.add_argument("data", help="dataset file")
    bench.set_defaults(func=_cmd_bench)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (SketchError, OSError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 1

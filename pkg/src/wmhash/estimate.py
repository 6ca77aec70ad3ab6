"""Collision-based similarity estimation and the MSE benchmark harness.

Two fingerprints from the same (algorithm, D, seed) estimate similarity by
the fraction of hash positions whose sample codes are equal. Code equality is
variant-specific and exact: real-valued payloads compare by bit pattern, and
sentinel codes never match anything.

The benchmark sweeps (algorithm, D, repetition), sketching every set of a
dataset and scoring sampled pairs against the generalized Jaccard oracle.
Everything except wall-clock timings is a pure function of (dataset, seed).
"""

from __future__ import annotations

import csv
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .algorithms import needs_layout, sketch
from .core import (
    AlgorithmMismatch,
    CodeVariant,
    EmptyDataset,
    Fingerprint,
    InvalidParams,
    LengthMismatch,
    SENTINEL_ELEMENT,
    SeedMismatch,
    SketchConfig,
    WeightedSet,
    algorithm_tag,
)
from .oracle import generalized_jaccard
from .sketch_misc import build_layout
from .variates import derive_seed

__all__ = [
    "collision_similarity",
    "mse",
    "DEFAULT_D_GRID",
    "select_pairs",
    "BenchRow",
    "BenchReport",
    "run_benchmark",
    "write_rows_csv",
    "write_mse_csv",
    "write_runtime_csv",
    "write_aggregate_csv",
    "write_pair_csv",
]

DEFAULT_D_GRID = (10, 20, 50, 100, 120, 150, 200)

# all-pairs threshold and sample size for larger datasets
_ALL_PAIRS_MAX = 200
_PAIR_SAMPLE = 5000


def _equal_codes(a: Fingerprint, b: Fingerprint) -> np.ndarray:
    variant = a.variant
    if variant is CodeVariant.MIN_VALUE or variant is CodeVariant.STEP_COUNT:
        return a.vals == b.vals
    eq = a.ks == b.ks
    eq &= a.ks != np.uint32(SENTINEL_ELEMENT)
    if variant is CodeVariant.INDEX_SUB:
        eq &= a.vals == b.vals
    elif variant is CodeVariant.INDEX_Y:
        eq &= a.vals.view("<u8") == b.vals.view("<u8")
    return eq


def collision_similarity(a: Fingerprint, b: Fingerprint) -> float:
    """Fraction of hash positions with equal sample codes."""
    if a.algo != b.algo:
        raise AlgorithmMismatch(f"cannot compare {a.algo!r} with {b.algo!r}")
    if a.num_hashes != b.num_hashes:
        raise LengthMismatch(f"D mismatch: {a.num_hashes} vs {b.num_hashes}")
    if a.seed != b.seed:
        raise SeedMismatch(f"seed mismatch: {a.seed} vs {b.seed}")
    return float(_equal_codes(a, b).mean())


def mse(estimates: Sequence[float], truths: Sequence[float]) -> float:
    """Mean squared error between estimates and ground truth."""
    est = np.asarray(estimates, dtype=np.float64)
    tru = np.asarray(truths, dtype=np.float64)
    if est.shape != tru.shape:
        raise LengthMismatch(f"{est.size} estimates vs {tru.size} truths")
    if est.size == 0:
        raise EmptyDataset("mse of no pairs")
    return float(np.mean((est - tru) ** 2))


def select_pairs(num_sets: int, seed: int) -> np.ndarray:
    """(n_pairs, 2) array of set-index pairs used for estimation.

    All unordered pairs up to 200 sets; beyond that a seeded sample of 5,000
    distinct pairs keeps the quadratic cost bounded.
    """
    if num_sets < 2:
        raise InvalidParams("need at least two sets to form pairs")
    ii, jj = np.triu_indices(num_sets, k=1)
    pairs = np.column_stack([ii, jj])
    if num_sets <= _ALL_PAIRS_MAX or len(pairs) <= _PAIR_SAMPLE:
        return pairs
    rng = np.random.default_rng([seed & (2**63 - 1), 0x9A17])
    take = rng.choice(len(pairs), size=_PAIR_SAMPLE, replace=False)
    take.sort()
    return pairs[take]


@dataclass(frozen=True)
class BenchRow:
    algo: str
    d: int
    repetition: int
    mse: float  # NaN on timeout
    sketch_seconds: float
    status: str  # "ok" | "timeout"


@dataclass(frozen=True)
class BenchReport:
    """Per-repetition rows plus aggregation helpers."""

    rows: tuple[BenchRow, ...]
    num_sets: int
    num_pairs: int

    def aggregates(self) -> list[tuple[str, int, float, float, int]]:
        """(algo, d, mean mse, std mse, ok-repetition count), input order."""
        order: list[tuple[str, int]] = []
        groups: dict[tuple[str, int], list[float]] = {}
        for row in self.rows:
            key = (row.algo, row.d)
            if key not in groups:
                groups[key] = []
                order.append(key)
            if row.status == "ok":
                groups[key].append(row.mse)
        out = []
        for algo, d in order:
            vals = groups[(algo, d)]
            if vals:
                mean = float(np.mean(vals))
                std = float(np.std(vals))
            else:
                mean = std = math.nan
            out.append((algo, d, mean, std, len(vals)))
        return out


def run_benchmark(dataset: Sequence[WeightedSet], algos: Sequence[str],
                  d_list: Sequence[int] = DEFAULT_D_GRID, repetitions: int = 10,
                  seed: int = 0, time_budget: float = 600.0,
                  threads: int = 1) -> BenchReport:
    """Sketch/estimate sweep over (algo, D, repetition).

    ``time_budget`` caps cumulative sketching seconds per (algo, D); when it
    trips with repetitions still to run, a single timeout row replaces them.
    Results other than timing are reproducible from (dataset, seed); threads
    only change wall-clock, never output.
    """
    if len(dataset) < 2:
        raise InvalidParams("benchmark needs at least two sets")
    if repetitions < 1:
        raise InvalidParams("repetitions must be >= 1")
    for algo in algos:
        algorithm_tag(algo)
    pairs = select_pairs(len(dataset), seed)
    truths = np.array([generalized_jaccard(dataset[i], dataset[j])
                       for i, j in pairs])
    layout = build_layout(dataset) if any(needs_layout(a) for a in algos) else None

    rows: list[BenchRow] = []
    for algo in algos:
        for d in d_list:
            spent = 0.0
            for rep in range(repetitions):
                cfg = SketchConfig(num_hashes=d, seed=derive_seed(seed, rep))
                t0 = time.perf_counter()
                if threads > 1:
                    with ThreadPoolExecutor(max_workers=threads) as pool:
                        fps = list(pool.map(
                            lambda s: sketch(algo, s, cfg, layout), dataset))
                else:
                    fps = [sketch(algo, s, cfg, layout) for s in dataset]
                elapsed = time.perf_counter() - t0
                spent += elapsed
                estimates = np.array([collision_similarity(fps[i], fps[j])
                                      for i, j in pairs])
                rows.append(BenchRow(algo, d, rep, mse(estimates, truths),
                                     elapsed, "ok"))
                if spent > time_budget and rep + 1 < repetitions:
                    rows.append(BenchRow(algo, d, rep + 1, math.nan, 0.0,
                                         "timeout"))
                    break
    return BenchReport(tuple(rows), len(dataset), len(pairs))


# ---------------------------------------------------------------------------
# CSV writers


def _fmt(x: float) -> str:
    return "nan" if math.isnan(x) else repr(x)


def write_rows_csv(path, report: BenchReport) -> None:
    """Full row schema: algo, D, repetition, mse, sketch_seconds, status."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["algo", "D", "repetition", "mse", "sketch_seconds", "status"])
        for r in report.rows:
            w.writerow([r.algo, r.d, r.repetition, _fmt(r.mse),
                        repr(r.sketch_seconds), r.status])


def write_mse_csv(path, report: BenchReport) -> None:
    """Timing-free rows, byte-stable across reruns of the same seed."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["algo", "D", "repetition", "mse", "status"])
        for r in report.rows:
            w.writerow([r.algo, r.d, r.repetition, _fmt(r.mse), r.status])


def write_runtime_csv(path, report: BenchReport) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["algo", "D", "repetition", "sketch_seconds", "status"])
        for r in report.rows:
            w.writerow([r.algo, r.d, r.repetition, repr(r.sketch_seconds),
                        r.status])


def write_aggregate_csv(path, report: BenchReport) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["algo", "D", "mean_mse", "std_mse", "reps_ok"])
        for algo, d, mean, std, n_ok in report.aggregates():
            w.writerow([algo, d, _fmt(mean), _fmt(std), n_ok])


def write_pair_csv(path, pairs, estimates, truths) -> None:
    """Per-pair estimate rows: i, j, estimate, truth, sq_error."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["i", "j", "estimate", "truth", "sq_error"])
        for (i, j), est, tru in zip(pairs, estimates, truths):
            w.writerow([int(i), int(j), repr(float(est)), repr(float(tru)),
                        repr(float((est - tru) ** 2))])

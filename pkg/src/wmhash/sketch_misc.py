"""Remaining weighted sketchers: threshold retention, exponential arg-min,
and red-green rejection sampling.

gollapudi-threshold and chum are the cheap-but-biased pair: the first
normalizes weights per set and keeps elements by a weight-proportional coin
before running plain minhash, the second hashes each element to an
exponential with its weight as the rate. Both are scale-invariant per set,
which is precisely the documented source of their bias.

shrivastava is unbiased but needs global knowledge: a layout of per-element
upper bounds partitions the mass M = sum U_k into a green region (below each
element's weight) and a red remainder. Every hash replays one shared
set-independent uniform sequence over [0, M) and reports how many samples it
took to land green; two sets collide exactly when the first green sample is
the same, which happens with probability sum(min)/sum(max).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .core import (
    BoundExceeded,
    EmptyDataset,
    EmptySet,
    Fingerprint,
    InvalidParams,
    SENTINEL_ELEMENT,
    SketchConfig,
    StepOverflow,
    WeightedSet,
)
from .sketch_quant import permuted_indices
from .variates import KeyedVariates, Slot

__all__ = [
    "sketch_gollapudi_threshold",
    "sketch_chum",
    "RedGreenLayout",
    "build_layout",
    "layout_from_bounds",
    "sketch_shrivastava",
    "STEP_CAP",
]

STEP_CAP = 10 ** 6  # rejection-walk safety limit per hash


def _source_for(cfg: SketchConfig, source):
    return KeyedVariates(cfg.seed) if source is None else source


def _require_nonempty(s: WeightedSet) -> None:
    if s.is_empty:
        raise EmptySet("cannot sketch an empty set")


def sketch_gollapudi_threshold(s: WeightedSet, cfg: SketchConfig,
                               source=None) -> Fingerprint:
    """Coin-thresholded minhash over per-set-normalized weights.

    Element k survives hash d iff a keyed uniform is at most S_k / max_j S_j;
    the code is the minhash winner among survivors, or the sentinel when the
    coins reject everything. Normalizing by the per-set maximum makes the
    sketch scale-invariant, hence biased as a weighted similarity estimator.
    """
    _require_nonempty(s)
    src = _source_for(cfg, source)
    D = cfg.num_hashes
    w_norm = s.weights / s.weights.max()
    d_col = np.arange(D)[:, None]
    k_row = s.indices.astype(np.int64)[None, :]
    coins = src.uniform(d_col, k_row, Slot.FRAC)
    retained = coins <= w_norm[None, :]
    pi = permuted_indices(src, D, cfg.perm_prime, s.indices)
    masked = np.where(retained, pi, np.uint64(cfg.perm_prime))
    best = masked.argmin(axis=1)
    ks = s.indices[best].astype(np.uint32)
    none_kept = ~retained[np.arange(D), best]
    ks[none_kept] = np.uint32(SENTINEL_ELEMENT)
    return Fingerprint("gollapudi-threshold", D, cfg.seed, ks, None)


def sketch_chum(s: WeightedSet, cfg: SketchConfig, source=None) -> Fingerprint:
    """Arg-min of per-element exponentials with rate S_k.

    a_k = Exp(1) / S_k is exponential with rate S_k, so selection is
    weight-proportional within the set; across sets the estimator is biased
    because a_k depends only on each set's own weights (no shared active
    index structure).
    """
    _require_nonempty(s)
    src = _source_for(cfg, source)
    D = cfg.num_hashes
    d_col = np.arange(D)[:, None]
    k_row = s.indices.astype(np.int64)[None, :]
    a = src.exp1(d_col, k_row, Slot.X) / s.weights[None, :]
    ks = s.indices[a.argmin(axis=1)].astype(np.uint32)
    return Fingerprint("chum", D, cfg.seed, ks, None)


# ---------------------------------------------------------------------------
# red-green layout

@dataclass(frozen=True)
class RedGreenLayout:
    """Per-element weight bounds laid out contiguously on [0, M).

    Element ``elements[i]`` owns the half-open span
    [offsets[i], offsets[i] + bounds[i]); a point lands green for a set when
    its offset into the span is at most the set's weight there.
    """

    elements: np.ndarray  # uint32, strictly increasing
    bounds: np.ndarray    # float64, strictly positive
    offsets: np.ndarray   # float64, length len(elements)+1, offsets[0] == 0

    def __post_init__(self):
        if len(self.elements) == 0:
            raise EmptyDataset("layout needs at least one element")
        if (self.bounds <= 0).any() or not np.isfinite(self.bounds).all():
            raise InvalidParams("layout bounds must be finite and positive")
        self.elements.setflags(write=False)
        self.bounds.setflags(write=False)
        self.offsets.setflags(write=False)

    @property
    def total_mass(self) -> float:
        return float(self.offsets[-1])

    def to_bounds(self) -> dict[int, float]:
        return {int(k): float(b) for k, b in zip(self.elements, self.bounds)}


def layout_from_bounds(bounds: Mapping[int, float]) -> RedGreenLayout:
    if not bounds:
        raise EmptyDataset("no bounds given")
    elements = np.array(sorted(bounds), dtype=np.uint32)
    ub = np.array([float(bounds[int(k)]) for k in elements], dtype=np.float64)
    offsets = np.concatenate([[0.0], np.cumsum(ub)])
    return RedGreenLayout(elements, ub, offsets)


def build_layout(dataset: Sequence[WeightedSet]) -> RedGreenLayout:
    """Tight per-element bounds from a full pass over the dataset."""
    if not dataset:
        raise EmptyDataset("cannot build a layout from no sets")
    acc: dict[int, float] = {}
    for s in dataset:
        for k, w in zip(s.indices, s.weights):
            key = int(k)
            if w > acc.get(key, 0.0):
                acc[key] = float(w)
    if not acc:
        raise EmptyDataset("dataset holds no elements")
    return layout_from_bounds(acc)


def sketch_shrivastava(s: WeightedSet, layout: RedGreenLayout,
                       cfg: SketchConfig, source=None) -> Fingerprint:
    """Rejection-sampling step counter over the shared layout sequence.

    Every hash d scans the same set-independent samples
    m_t = M * uniform(d, t), t = 1, 2, ...; the code is the first t whose
    sample lands in the green region of this set. The sequence never depends
    on the set, so all sets agree on what sample t is, and collision reduces
    to "the first green-for-either sample is green for both".
    """
    _require_nonempty(s)
    src = _source_for(cfg, source)
    # guard the precondition: every weight within its layout bound
    pos = np.searchsorted(layout.elements, s.indices)
    covered = (pos < len(layout.elements)) & \
        (layout.elements[np.minimum(pos, len(layout.elements) - 1)] == s.indices)
    if not covered.all():
        missing = s.indices[~covered][0]
        raise BoundExceeded(f"element {missing} absent from layout bounds")
    if (s.weights > layout.bounds[pos]).any():
        bad = s.indices[s.weights > layout.bounds[pos]][0]
        raise BoundExceeded(f"weight of element {bad} exceeds its layout bound")

    # dense per-slot green height for this set (0 where the set is absent)
    green = np.zeros(len(layout.elements), dtype=np.float64)
    green[pos] = s.weights

    D = cfg.num_hashes
    M = layout.total_mass
    steps = np.zeros(D, dtype=np.int64)
    pending = np.arange(D)
    t = 0
    while pending.size:
        t += 1
        if t > STEP_CAP:
            raise StepOverflow(f"no green sample within {STEP_CAP} steps")
        m = M * src.uniform(pending, 0, Slot.GEO, np.uint64(t))
        slot = np.searchsorted(layout.offsets, m, side="right") - 1
        slot = np.clip(slot, 0, len(layout.elements) - 1)
        off = m - layout.offsets[slot]
        hit = (off <= green[slot]) & (green[slot] > 0.0)
        steps[pending[hit]] = t
        pending = pending[~hit]
    return Fingerprint("shrivastava", D, cfg.seed, None, steps.astype("<u8"))

"""Consistent weighted sampling family: cws, icws, 0bit, ccws, pcws, i2cws.

Every member assigns each element k an exponential-like hash value a_k whose
rate is the weight S_k, so the minimum over k selects elements with
probability proportional to weight, and two sets collide on a hash with
probability equal to their generalized Jaccard similarity. Consistency (the
property that makes the collision law hold jointly across sets) comes from
keying all randomness by (hash index, element): a set with a smaller weight
on k reads a prefix of the same random structure.

Members differ in how they produce the "active index" pair (y_k, z_k) with
y_k <= S_k < z_k and the hash a_k:

- cws materializes the active indices explicitly as descending multiplicative
  chains inside dyadic intervals (2^(j-1), 2^j];
- icws samples the floor cell in log domain with a Gamma(2,1) step;
- 0bit is icws keeping only the winning element id;
- ccws quantizes the raw weight instead of its logarithm (its z can
  degenerate; such elements are excluded from the minimum);
- pcws rebuilds the icws quantities from four uniforms instead of five;
- i2cws decouples z from y and computes y only for the winner, once per hash.

The closed-form kernels broadcast over elements: passing index and weight
arrays of length n yields (num_hashes, n) matrices. Scalar element inputs
yield flat (num_hashes,) vectors, which is what the law tests use.
"""

from __future__ import annotations

import math

import numpy as np

from .core import (
    EmptySet,
    Fingerprint,
    SENTINEL_ELEMENT,
    SketchConfig,
    SketchError,
    WeightedSet,
)
from .variates import KeyedVariates, Slot

__all__ = [
    "icws_element",
    "pcws_element",
    "ccws_element",
    "cws_element",
    "i2cws_z_element",
    "i2cws_y_for",
    "sketch_cws",
    "sketch_icws",
    "sketch_0bit",
    "sketch_ccws",
    "sketch_pcws",
    "sketch_i2cws",
]

# Dyadic-interval searches terminate after a couple of steps with
# overwhelming probability; the cap only guards against degenerate inputs.
_MAX_INTERVAL_STEPS = 64


def _source_for(cfg: SketchConfig, source):
    return KeyedVariates(cfg.seed) if source is None else source


def _require_nonempty(s: WeightedSet) -> None:
    if s.is_empty:
        raise EmptySet("cannot sketch an empty set")


def _lanes(num_hashes: int, k, weight):
    """Broadcastable (d, k, ln-less weight) triple; flat when k is scalar."""
    scalar = np.ndim(k) == 0
    k_arr = np.atleast_1d(np.asarray(k, dtype=np.int64))
    w_arr = np.atleast_1d(np.asarray(weight, dtype=np.float64))
    d = np.arange(num_hashes)
    if not scalar:
        d = d[:, None]
        k_arr = k_arr[None, :]
        w_arr = w_arr[None, :]
    else:
        k_arr = k_arr[0]
        w_arr = w_arr[0]
    return d, k_arr, w_arr


# ---------------------------------------------------------------------------
# per-element kernels

def icws_element(source, num_hashes: int, k, weight):
    """(a_k, y_k) across hashes; element axis broadcast when k is an array.

    y_k is the weight rounded down to its keyed log-domain cell, so it lands
    in (S_k * exp(-r), S_k]; a_k = c / (y_k * exp(r)) is Exp(S_k) distributed.
    Costs exactly five uniforms per (hash, element): two Gamma(2,1) draws and
    one beta.
    """
    d, kk, w = _lanes(num_hashes, k, weight)
    r = source.gamma21(d, kk, Slot.R1)
    beta = source.uniform(d, kk, Slot.BETA)
    c = source.gamma21(d, kk, Slot.C1)
    t = np.floor(np.log(w) / r + beta)
    y = np.exp(r * (t - beta))
    a = c / (y * np.exp(r))
    return a, y


def pcws_element(source, num_hashes: int, k, weight):
    """(a_k, y_k, s_hat) across hashes, four uniforms per (hash, element).

    The Gamma(2,1) step r is assembled from two of the uniforms as
    -ln(u1*u2); the scale estimate s_hat = y/u1 replaces the exact weight in
    the exponential hash, trading a little variance for one fewer draw.
    """
    d, kk, w = _lanes(num_hashes, k, weight)
    u1 = source.uniform(d, kk, Slot.U1)
    u2 = source.uniform(d, kk, Slot.U2)
    beta = source.uniform(d, kk, Slot.BETA)
    x = source.uniform(d, kk, Slot.X)
    r = -np.log(u1 * u2)
    t = np.floor(np.log(w) / r + beta)
    y = np.exp(r * (t - beta))
    s_hat = y / u1
    a = -np.log(x) / s_hat
    return a, y, s_hat


def ccws_element(source, num_hashes: int, k, weight):
    """(a_k, y_k, degenerate mask) across hashes.

    Quantization runs on the raw weight: y_k = r*(floor(S_k/r + beta) - beta)
    with r ~ Beta(2,1), giving y_k in [S_k - r, S_k]. The implied upper
    neighbor satisfies 1/z = 1/y - 2r, which collapses (z <= 0, or y <= 0
    outright when S_k < r) for small weights; such draws are flagged and
    excluded from the arg-min through an infinite hash value.
    """
    d, kk, w = _lanes(num_hashes, k, weight)
    r = source.beta21(d, kk, Slot.R1)
    beta = source.uniform(d, kk, Slot.BETA)
    c = source.gamma21(d, kk, Slot.C1)
    y = r * (np.floor(w / r + beta) - beta)
    with np.errstate(divide="ignore", invalid="ignore"):
        inv_z = 1.0 / y - 2.0 * r
        a = c * inv_z
    degenerate = (y <= 0.0) | (inv_z <= 0.0)
    a = np.where(degenerate, np.inf, a)
    return a, y, degenerate


def i2cws_z_element(source, num_hashes: int, k, weight):
    """(a_k, z_k) across hashes; z is sampled without reference to y.

    z_k is the weight rounded *up* to its keyed log cell (the +1 in the
    exponent), so z_k > S_k always; a_k = c / z_k.
    """
    d, kk, w = _lanes(num_hashes, k, weight)
    r2 = source.gamma21(d, kk, Slot.R2)
    b2 = source.uniform(d, kk, Slot.B2)
    c = source.gamma21(d, kk, Slot.C1)
    t2 = np.floor(np.log(w) / r2 + b2)
    z = np.exp(r2 * (t2 - b2 + 1.0))
    a = c / z
    return a, z


def i2cws_y_for(source, winners: np.ndarray, weights: np.ndarray) -> np.ndarray:
    """y values for per-hash winning elements, one draw set per hash.

    ``winners`` and ``weights`` are aligned per-hash arrays. The y side uses
    its own slots, so an audit that y variates are drawn once per hash (not
    once per element) can observe exactly that.
    """
    d = np.arange(len(winners))
    r1 = source.gamma21(d, winners, Slot.R1)
    b1 = source.uniform(d, winners, Slot.B1)
    t1 = np.floor(np.log(weights) / r1 + b1)
    return np.exp(r1 * (t1 - b1))


def _pow2(j: int) -> float:
    try:
        return math.ldexp(1.0, j)
    except OverflowError:
        raise SketchError("interval index outside float64 range") from None


def _interval_of(weight: float) -> int:
    """Index j of the dyadic interval (2^(j-1), 2^j] holding the weight."""
    j = math.ceil(math.log2(weight))
    while _pow2(j - 1) >= weight:
        j -= 1
    while _pow2(j) < weight:
        j += 1
    return j


def _chain_ctr(j: int, m) -> np.ndarray | np.uint64:
    # chain position m within interval j, packed into one counter word;
    # the offset keeps negative intervals addressable
    return np.uint64((j + 2048) << 32) | np.uint64(m)


def cws_element(source, num_hashes: int, k: int, weight: float):
    """(a_k, y_k, z_k) for one element via explicit interval chains.

    Each dyadic interval (2^(j-1), 2^j] carries a descending chain
    x_1 = 2^j * u_1, x_{m+1} = x_m * u_{m+1}, truncated once it falls to the
    lower endpoint; chain members are the active indices. y_k is the largest
    active index <= S_k (found in the weight's interval or below), z_k the
    smallest one > S_k (in the weight's interval or above). Chains restart
    per interval and draws are keyed by (interval, position), so every set
    sees the same actives. a_k = c / z_k with c keyed by (d, k) alone.

    Unlike the closed-form kernels this one walks variable-length chains, so
    it takes a single element at a time.
    """
    d = np.arange(num_hashes)
    jW = _interval_of(weight)

    # descend for y: the first chain member at or below the weight that is
    # still above its interval's lower endpoint settles the lane
    y = np.zeros(num_hashes)
    pending = np.arange(num_hashes)
    for step in range(_MAX_INTERVAL_STEPS):
        j = jW - step
        lo = _pow2(j - 1)
        cur = pending
        x = _pow2(j) * source.uniform(d[cur], k, Slot.CHAIN, _chain_ctr(j, 1))
        m = 1
        exhausted = []
        while cur.size:
            alive = x > lo
            exhausted.append(cur[~alive])
            hit = alive & (x <= weight)
            y[cur[hit]] = x[hit]
            walk = alive & ~hit
            cur = cur[walk]
            x = x[walk]
            if cur.size:
                m += 1
                x = x * source.uniform(d[cur], k, Slot.CHAIN, _chain_ctr(j, m))
        pending = np.concatenate(exhausted) if exhausted else pending[:0]
        if pending.size == 0:
            break
    else:
        raise SketchError("interval descent exceeded the step cap")

    # ascend for z: the last chain member above max(lower endpoint, weight)
    # is the smallest active index beyond the weight
    z = np.zeros(num_hashes)
    pending = np.arange(num_hashes)
    for step in range(_MAX_INTERVAL_STEPS):
        j = jW + step
        lo = _pow2(j - 1)
        thr = max(lo, weight)
        x = _pow2(j) * source.uniform(d[pending], k, Slot.CHAIN, _chain_ctr(j, 1))
        cand = np.zeros(pending.size)
        has = np.zeros(pending.size, dtype=bool)
        walking = x > thr
        m = 1
        while walking.any():
            cand[walking] = x[walking]
            has[walking] = True
            m += 1
            idx = np.flatnonzero(walking)
            x[idx] = x[idx] * source.uniform(d[pending[idx]], k, Slot.CHAIN,
                                             _chain_ctr(j, m))
            walking[idx] = x[idx] > thr
        z[pending[has]] = cand[has]
        pending = pending[~has]
        if pending.size == 0:
            break
    else:
        raise SketchError("interval ascent exceeded the step cap")

    c = source.gamma21(d, k, Slot.C1)
    a = c / z
    return a, y, z


# ---------------------------------------------------------------------------
# sketchers

def _matrix_argmin(s: WeightedSet, a: np.ndarray, y: np.ndarray):
    """Row-wise winner of the (D, n) hash matrix; ties go to the lower index."""
    best = a.argmin(axis=1)
    rows = np.arange(a.shape[0])
    ks = s.indices[best].astype(np.uint32)
    ys = y[rows, best]
    lost = ~np.isfinite(a[rows, best])
    if lost.any():
        ks[lost] = np.uint32(SENTINEL_ELEMENT)
        ys = ys.copy()
        ys[lost] = 0.0
    return ks, ys, best


def sketch_icws(s: WeightedSet, cfg: SketchConfig, source=None) -> Fingerprint:
    """Log-domain consistent sampler; five uniforms per (hash, element)."""
    _require_nonempty(s)
    src = _source_for(cfg, source)
    a, y = icws_element(src, cfg.num_hashes, s.indices, s.weights)
    ks, ys, _ = _matrix_argmin(s, a, y)
    return Fingerprint("icws", cfg.num_hashes, cfg.seed, ks, ys.astype("<f8"))


def sketch_0bit(s: WeightedSet, cfg: SketchConfig, source=None) -> Fingerprint:
    """The icws winner id alone; cheaper codes, slightly optimistic collisions."""
    _require_nonempty(s)
    src = _source_for(cfg, source)
    a, y = icws_element(src, cfg.num_hashes, s.indices, s.weights)
    ks, _, _ = _matrix_argmin(s, a, y)
    return Fingerprint("0bit", cfg.num_hashes, cfg.seed, ks, None)


def sketch_pcws(s: WeightedSet, cfg: SketchConfig, source=None) -> Fingerprint:
    """Four-uniform variant; hash rate uses the recovered scale y/u1."""
    _require_nonempty(s)
    src = _source_for(cfg, source)
    a, y, _ = pcws_element(src, cfg.num_hashes, s.indices, s.weights)
    ks, ys, _ = _matrix_argmin(s, a, y)
    return Fingerprint("pcws", cfg.num_hashes, cfg.seed, ks, ys.astype("<f8"))


def sketch_ccws(s: WeightedSet, cfg: SketchConfig, source=None,
                diagnostics: dict | None = None) -> Fingerprint:
    """Raw-weight quantization variant.

    Elements whose implied z degenerates are excluded from the arg-min; a
    hash where every element degenerates emits the sentinel code. When
    ``diagnostics`` is a dict it receives ``degenerate_draws``, the count of
    excluded (hash, element) pairs.
    """
    _require_nonempty(s)
    src = _source_for(cfg, source)
    a, y, degenerate = ccws_element(src, cfg.num_hashes, s.indices, s.weights)
    ks, ys, _ = _matrix_argmin(s, a, y)
    if diagnostics is not None:
        diagnostics["degenerate_draws"] = int(degenerate.sum())
    return Fingerprint("ccws", cfg.num_hashes, cfg.seed, ks, ys.astype("<f8"))


def sketch_cws(s: WeightedSet, cfg: SketchConfig, source=None) -> Fingerprint:
    """Explicit active-index sampler over dyadic interval chains."""
    _require_nonempty(s)
    src = _source_for(cfg, source)
    D = cfg.num_hashes
    best_a = np.full(D, np.inf)
    best_k = np.full(D, SENTINEL_ELEMENT, dtype=np.uint32)
    best_y = np.zeros(D)
    for k, w in zip(s.indices, s.weights):
        a, y, _ = cws_element(src, D, int(k), float(w))
        upd = a < best_a
        best_a[upd] = a[upd]
        best_k[upd] = k
        best_y[upd] = y[upd]
    return Fingerprint("cws", D, cfg.seed, best_k, best_y.astype("<f8"))


def sketch_i2cws(s: WeightedSet, cfg: SketchConfig, source=None) -> Fingerprint:
    """Decoupled variant: z-side ranks elements, y computed once per hash."""
    _require_nonempty(s)
    src = _source_for(cfg, source)
    D = cfg.num_hashes
    a, _ = i2cws_z_element(src, D, s.indices, s.weights)
    best = a.argmin(axis=1)
    ks = s.indices[best].astype(np.uint32)
    ws = s.weights[best]
    ys = i2cws_y_for(src, ks.astype(np.int64), ws)
    return Fingerprint("i2cws", D, cfg.seed, ks, ys.astype("<f8"))

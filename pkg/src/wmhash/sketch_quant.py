"""Quantization-based weighted minhash sketchers.

The family treats a weight as a count of unit subelements after scaling by an
integer C: element k with weight S_k becomes subelements (k, 1..floor(C*S_k)).
Binary minhash over the subelement universe then inherits the weighted
collision law. The three members differ in how they pay for that expansion:

- haveliwala hashes every subelement (exhaustive, exact on the quantized
  weights);
- haeupler adds one probabilistic subelement for the fractional remainder,
  removing most of the quantization bias;
- gollapudi-int visits only the "active" subelements, the running minima of
  the exhaustive scan, using geometric skips; it reproduces the exhaustive
  law draw for draw in expectation while touching O(log W) positions.

Subelement hashes are keyed by absolute subelement index, so a set with a
smaller weight sees a prefix of the same randomness (consistency across sets).
The plain binary minhash over a linear-congruential permutation also lives
here, as the baseline the weighted sketchers are compared against.
"""

from __future__ import annotations

import numpy as np

from .core import (
    EmptyQuantization,
    EmptySet,
    Fingerprint,
    InvalidParams,
    SENTINEL_ELEMENT,
    SketchConfig,
    WeightedSet,
)
from .variates import KeyedVariates, Slot

__all__ = [
    "sketch_minhash",
    "sketch_haveliwala",
    "sketch_haeupler",
    "sketch_gollapudi_int",
]

_SUB_BLOCK = 1024  # subelement columns hashed per vector block


def _source_for(cfg: SketchConfig, source):
    return KeyedVariates(cfg.seed) if source is None else source


def _require_nonempty(s: WeightedSet) -> None:
    if s.is_empty:
        raise EmptySet("cannot sketch an empty set")


def permutation_coeffs(source, num_hashes: int, prime: int):
    """Per-hash coefficients (a_d, b_d), both uniform on 1..prime-1."""
    d = np.arange(num_hashes)
    ua = source.uniform(d, 0, Slot.PERM_A)
    ub = source.uniform(d, 0, Slot.PERM_B)
    a = 1 + np.floor(ua * (prime - 1)).astype(np.uint64)
    b = 1 + np.floor(ub * (prime - 1)).astype(np.uint64)
    return a, b


def permuted_indices(source, num_hashes: int, prime: int, indices: np.ndarray):
    """Matrix pi_d(k) = (a_d * k + b_d) mod prime, shape (D, n)."""
    a, b = permutation_coeffs(source, num_hashes, prime)
    k = indices.astype(np.uint64)[None, :]
    return (a[:, None] * k + b[:, None]) % np.uint64(prime)


def sketch_minhash(s: WeightedSet, cfg: SketchConfig, source=None) -> Fingerprint:
    """Binary minhash of the support; weights are ignored.

    Emits the minimum permuted index per hash. Collision probability between
    two fingerprints equals the (unweighted) Jaccard of the supports.
    """
    _require_nonempty(s)
    if cfg.perm_prime < s.universe_size:
        raise InvalidParams(
            f"perm_prime {cfg.perm_prime} smaller than universe {s.universe_size}")
    source = _source_for(cfg, source)
    pi = permuted_indices(source, cfg.num_hashes, cfg.perm_prime, s.indices)
    return Fingerprint("minhash", cfg.num_hashes, cfg.seed,
                       None, pi.min(axis=1).astype("<u8"))


def _quantized(s: WeightedSet, scale: int) -> np.ndarray:
    return np.floor(np.float64(scale) * s.weights).astype(np.int64)


def _subelement_min(source, num_hashes: int, k: int, count: int):
    """Running (min value, arg subelement) over hashes of (k, 1..count)."""
    d_col = np.arange(num_hashes)[:, None]
    best_v = np.full(num_hashes, np.inf)
    best_i = np.zeros(num_hashes, dtype=np.int64)
    for start in range(1, count + 1, _SUB_BLOCK):
        stop = min(start + _SUB_BLOCK, count + 1)
        counters = np.arange(start, stop, dtype=np.uint64)[None, :]
        u = source.uniform(d_col, k, Slot.SUB, counters)
        j = u.argmin(axis=1)
        v = u[np.arange(num_hashes), j]
        upd = v < best_v
        best_v[upd] = v[upd]
        best_i[upd] = int(start) + j[upd]
    return best_v, best_i


def sketch_haveliwala(s: WeightedSet, cfg: SketchConfig, source=None) -> Fingerprint:
    """Exhaustive subelement minhash over floor(C * S_k) unit pieces."""
    _require_nonempty(s)
    source = _source_for(cfg, source)
    counts = _quantized(s, cfg.quant_scale)
    if not (counts >= 1).any():
        raise EmptyQuantization(
            f"no element reaches weight 1/{cfg.quant_scale} after quantization")
    D = cfg.num_hashes
    best_v = np.full(D, np.inf)
    best_k = np.full(D, SENTINEL_ELEMENT, dtype=np.uint32)
    best_i = np.zeros(D, dtype=np.int64)
    for k, w_count in zip(s.indices, counts):
        if w_count < 1:
            continue
        v, i = _subelement_min(source, D, int(k), int(w_count))
        upd = v < best_v
        best_v[upd] = v[upd]
        best_k[upd] = k
        best_i[upd] = i[upd]
    return Fingerprint("haveliwala", D, cfg.seed,
                       best_k, best_i.astype("<u8"))


def sketch_haeupler(s: WeightedSet, cfg: SketchConfig, source=None) -> Fingerprint:
    """Haveliwala plus a Bernoulli subelement for the fractional remainder.

    Element k contributes subelements 1..floor(C*S_k) always, and subelement
    floor(C*S_k)+1 with probability frac(C*S_k). The coin is one keyed draw
    per (hash, element), so two sets with the same weight flip identically,
    and a set with a larger integer part owns the same subelement
    deterministically. A hash where nothing survives emits the sentinel code.
    """
    _require_nonempty(s)
    source = _source_for(cfg, source)
    D = cfg.num_hashes
    scaled = np.float64(cfg.quant_scale) * s.weights
    counts = np.floor(scaled).astype(np.int64)
    fracs = scaled - counts
    d = np.arange(D)
    best_v = np.full(D, np.inf)
    best_k = np.full(D, SENTINEL_ELEMENT, dtype=np.uint32)
    best_i = np.zeros(D, dtype=np.int64)
    for k, w_count, frac in zip(s.indices, counts, fracs):
        k = int(k)
        w_count = int(w_count)
        if w_count >= 1:
            v, i = _subelement_min(source, D, k, w_count)
        else:
            v = np.full(D, np.inf)
            i = np.zeros(D, dtype=np.int64)
        if frac > 0.0:
            coin = source.uniform(d, k, Slot.FRAC) < frac
            extra = source.uniform(d, k, Slot.SUB, np.uint64(w_count + 1))
            take = coin & (extra < v)
            v = np.where(take, extra, v)
            i = np.where(take, w_count + 1, i)
        upd = v < best_v
        best_v[upd] = v[upd]
        best_k[upd] = k
        best_i[upd] = i[upd]
    return Fingerprint("haeupler", D, cfg.seed, best_k, best_i.astype("<u8"))


def _record_chain(source, num_hashes: int, k: int, count: int):
    """Active-index walk for one element: returns (min value, index, visits).

    Starts at subelement 1 with v = uniform(d, k, SUB, 1), then alternates a
    geometric skip of ceil(ln u / ln(1 - v)) positions (u keyed by the index
    being left) with a multiplicative shrink v *= uniform (keyed by the index
    landed on), stopping once the skip leaves 1..count. Skips collapse to one
    position when v is within 1e-12 of 1, where the log ratio loses meaning.
    """
    d = np.arange(num_hashes)
    v = source.uniform(d, k, Slot.SUB, 1)
    i = np.ones(num_hashes, dtype=np.int64)
    visits = np.ones(num_hashes, dtype=np.int64)
    if count == 1:
        return v, i, visits
    alive = np.arange(num_hashes)
    while alive.size:
        da = d[alive]
        ia = i[alive]
        va = v[alive]
        u = source.uniform(da, k, Slot.GEO, ia.astype(np.uint64))
        with np.errstate(divide="ignore"):
            g = np.ceil(np.log(u) / np.log1p(-va))
        g = np.where(va >= 1.0 - 1e-12, 1.0, g)
        g = np.maximum(g, 1.0).astype(np.int64)
        nxt = ia + g
        ok = nxt <= count
        landed = alive[ok]
        if landed.size:
            i[landed] = nxt[ok]
            v[landed] *= source.uniform(d[landed], k, Slot.CHAIN,
                                        nxt[ok].astype(np.uint64))
            visits[landed] += 1
        alive = landed
    return v, i, visits


def sketch_gollapudi_int(s: WeightedSet, cfg: SketchConfig, source=None,
                         diagnostics: dict | None = None) -> Fingerprint:
    """Active-index sketcher over the quantized subelements.

    Same collision law as :func:`sketch_haveliwala` on the same data, at
    O(log W) visited subelements per element. If ``diagnostics`` is a dict it
    receives ``mean_visits``: a list of (element, count, mean visited active
    indices per hash).
    """
    _require_nonempty(s)
    source = _source_for(cfg, source)
    counts = _quantized(s, cfg.quant_scale)
    if not (counts >= 1).any():
        raise EmptyQuantization(
            f"no element reaches weight 1/{cfg.quant_scale} after quantization")
    D = cfg.num_hashes
    best_v = np.full(D, np.inf)
    best_k = np.full(D, SENTINEL_ELEMENT, dtype=np.uint32)
    best_i = np.zeros(D, dtype=np.int64)
    stats = [] if diagnostics is not None else None
    for k, w_count in zip(s.indices, counts):
        if w_count < 1:
            continue
        v, i, visits = _record_chain(source, D, int(k), int(w_count))
        if stats is not None:
            stats.append((int(k), int(w_count), float(visits.mean())))
        upd = v < best_v
        best_v[upd] = v[upd]
        best_k[upd] = k
        best_i[upd] = i[upd]
    if diagnostics is not None:
        diagnostics["mean_visits"] = stats
    return Fingerprint("gollapudi-int", D, cfg.seed, best_k, best_i.astype("<u8"))

"""Keyed deterministic random variates.

Every random quantity in this library is addressed by a key
``(seed, d, k, slot, counter)``: global seed, hash index, element id, named
sub-stream, and a position within the sub-stream. The same key always yields
the same value; distinct keys yield statistically independent values. This is
what lets a sketcher hand the same element the same randomness in two
different sets (the global-mapping requirement behind consistency) without
ever materializing per-element tables, and it is why sketches are reproducible
bit for bit across runs, platforms, and thread counts.

Generation is counter-based: the key fields are absorbed one by one into a
64-bit state through a splitmix64 finalizer, and the final word is mapped to
the open unit interval. There is no sequential generator state anywhere.

``KeyedVariates`` is the production source. ``MatrixVariates`` implements the
same interface on top of independently generated lookup tables (numpy PCG64)
and exists to cross-validate the keyed construction statistically; it
materializes a (D x universe) table per (slot, counter) and is only meant for
test-sized problems. ``CountingVariates`` wraps any source and counts draws
per slot, used by the draw-budget audits.
"""

from __future__ import annotations

import enum
import math
from typing import NamedTuple

import numpy as np

__all__ = [
    "Slot",
    "VariateKey",
    "uniform01",
    "gamma21",
    "exp1",
    "beta21",
    "KeyedVariates",
    "MatrixVariates",
    "CountingVariates",
    "derive_seed",
]

_MASK64 = (1 << 64) - 1

# splitmix64 finalizer constants
_F1 = np.uint64(0xBF58476D1CE4E5B9)
_F2 = np.uint64(0x94D049BB133111EB)

# per-field absorption multipliers (odd, so each field map is a bijection)
_M_K = np.uint64(0x9E3779B97F4A7C15)
_M_SLOT = np.uint64(0xC2B2AE3D27D4EB4F)
_M_D = np.uint64(0xD6E8FEB86659FD93)
_M_CTR = np.uint64(0xA24BAED4963EE407)
_SALT = np.uint64(0x5851F42D4C957F2D)

_U30 = np.uint64(30)
_U27 = np.uint64(27)
_U31 = np.uint64(31)
_U12 = np.uint64(12)
_HALF = np.float64(0.5)
_2_52 = np.float64(2.0**-52)


class Slot(enum.IntEnum):
    """Named variate sub-streams. Values are part of the key; never renumber."""

    U1 = 1
    U2 = 2
    BETA = 3
    X = 4
    R1 = 5
    R2 = 6
    B1 = 7
    B2 = 8
    C1 = 9
    C2 = 10
    FRAC = 11
    GEO = 12
    CHAIN = 13
    SUB = 14
    PERM_A = 15
    PERM_B = 16
    GEN_IDX = 17
    GEN_W = 18


class VariateKey(NamedTuple):
    """Address of a single scalar draw."""

    seed: int
    d: int
    k: int
    slot: Slot
    counter: int = 0


def _fin(z: np.ndarray | np.uint64) -> np.ndarray | np.uint64:
    """splitmix64 finalizer; bijective on uint64."""
    # Wraparound at 2^64 is the point of the mixer; silence the scalar-path
    # overflow warning (array ops never raise it).
    with np.errstate(over="ignore"):
        z = (z ^ (z >> _U30)) * _F1
        z = (z ^ (z >> _U27)) * _F2
        return z ^ (z >> _U31)


def _u64(x) -> np.ndarray | np.uint64:
    if isinstance(x, np.ndarray) and x.dtype == np.uint64:
        return x
    return np.asarray(x).astype(np.uint64, copy=False)


def _mix(seed_state, k, slot: int, d, counter):
    """Absorb key fields in fixed order: seed (pre-absorbed), k, slot, d, counter."""
    with np.errstate(over="ignore"):
        h = _fin(seed_state ^ (_u64(k) * _M_K))
        h = _fin(h ^ (np.uint64(int(slot)) * _M_SLOT))
        h = _fin(h ^ (_u64(d) * _M_D))
        return _fin(h ^ (_u64(counter) * _M_CTR))


def _seed_state(seed: int) -> np.uint64:
    return _fin(np.uint64(seed & _MASK64) ^ _SALT)


def _to_unit(h):
    # Top 52 bits of the mixed word, offset to the cell midpoint: with
    # m < 2^52 the sum m + 0.5 is exact in float64, so every draw is exactly
    # (m + 0.5) * 2^-52, inside [2^-53, 1 - 2^-53]. Using 53 bits instead
    # would hit round-half-even on the offset and let the top cell collapse
    # to 1.0.
    return ((h >> _U12).astype(np.float64) + _HALF) * _2_52


class KeyedVariates:
    """Counter-based keyed variate source for one global seed.

    The vector methods broadcast ``d``, ``k`` and ``counter`` against each
    other (numpy rules), which is how sketch kernels draw whole hash-lane
    blocks in one call.
    """

    def __init__(self, seed: int):
        self.seed = seed
        self._h0 = _seed_state(seed)

    def uniform(self, d, k, slot: Slot, counter=0) -> np.ndarray:
        """Uniform draws on the open interval (0, 1)."""
        return _to_unit(_mix(self._h0, k, slot, d, counter))

    def gamma21(self, d, k, slot: Slot, counter=0) -> np.ndarray:
        """Gamma(2,1) draws: -ln(u0 * u1) from counters (2c, 2c+1) of the slot."""
        c = _u64(counter)
        two = np.uint64(2)
        u0 = self.uniform(d, k, slot, c * two)
        u1 = self.uniform(d, k, slot, c * two + np.uint64(1))
        return -np.log(u0 * u1)

    def exp1(self, d, k, slot: Slot, counter=0) -> np.ndarray:
        """Exp(1) draws."""
        return -np.log(self.uniform(d, k, slot, counter))

    def beta21(self, d, k, slot: Slot, counter=0) -> np.ndarray:
        """Beta(2,1) draws (density 2x on the unit interval), via sqrt(u)."""
        return np.sqrt(self.uniform(d, k, slot, counter))


def uniform01(key: VariateKey) -> float:
    """Scalar uniform draw on (0, 1) for one key."""
    return float(_to_unit(_mix(_seed_state(key.seed), key.k, key.slot, key.d, key.counter)))


def gamma21(key: VariateKey) -> float:
    """Scalar Gamma(2,1) draw: -ln(u0*u1), u_i at counters (2c, 2c+1) of key.slot."""
    u0 = uniform01(key._replace(counter=2 * key.counter))
    u1 = uniform01(key._replace(counter=2 * key.counter + 1))
    return -math.log(u0 * u1)


def exp1(key: VariateKey) -> float:
    """Scalar Exp(1) draw."""
    return -math.log(uniform01(key))


def beta21(key: VariateKey) -> float:
    """Scalar Beta(2,1) draw."""
    return math.sqrt(uniform01(key))


def derive_seed(seed: int, stream: int) -> int:
    """Derive a child seed (benchmark repetitions); stable across platforms."""
    with np.errstate(over="ignore"):
        return int(_fin(_fin(np.uint64(seed & _MASK64) ^ _SALT) ^ (np.uint64(stream) * _M_CTR)))


class MatrixVariates:
    """Table-backed twin of :class:`KeyedVariates` for cross-validation.

    Draws come from lazily generated (D x universe) uniform tables, one table
    per (slot, counter), filled by an independent generator (PCG64). The
    values differ from the keyed source draw by draw, but any sketcher's
    output law is identical, which is what the cross-validation tests check.
    Memory grows with the number of distinct (slot, counter) pairs touched;
    use at test scale only.
    """

    def __init__(self, seed: int, num_hashes: int, universe_size: int):
        self.seed = seed
        self.num_hashes = num_hashes
        self.universe_size = universe_size
        self._tables: dict[tuple[int, int], np.ndarray] = {}

    def _table(self, slot: int, counter: int) -> np.ndarray:
        key = (int(slot), int(counter))
        tab = self._tables.get(key)
        if tab is None:
            rng = np.random.default_rng([self.seed & _MASK64, int(slot), int(counter)])
            raw = rng.integers(0, 1 << 52, size=(self.num_hashes, self.universe_size), dtype=np.uint64)
            tab = (raw.astype(np.float64) + 0.5) * 2.0**-52
            self._tables[key] = tab
        return tab

    def uniform(self, d, k, slot: Slot, counter=0) -> np.ndarray:
        d_arr, k_arr, c_arr = np.broadcast_arrays(
            np.asarray(d, dtype=np.int64),
            np.asarray(k, dtype=np.int64),
            np.asarray(counter, dtype=np.int64),
        )
        out = np.empty(d_arr.shape, dtype=np.float64)
        flat_d, flat_k, flat_c = d_arr.ravel(), k_arr.ravel(), c_arr.ravel()
        flat_out = out.ravel()
        for c in np.unique(flat_c):
            mask = flat_c == c
            tab = self._table(int(slot), int(c))
            flat_out[mask] = tab[flat_d[mask], flat_k[mask]]
        return out if out.shape else np.float64(flat_out[0])

    def gamma21(self, d, k, slot: Slot, counter=0) -> np.ndarray:
        c = np.asarray(counter, dtype=np.int64)
        u0 = self.uniform(d, k, slot, c * 2)
        u1 = self.uniform(d, k, slot, c * 2 + 1)
        return -np.log(u0 * u1)

    def exp1(self, d, k, slot: Slot, counter=0) -> np.ndarray:
        return -np.log(self.uniform(d, k, slot, counter))

    def beta21(self, d, k, slot: Slot, counter=0) -> np.ndarray:
        return np.sqrt(self.uniform(d, k, slot, counter))


class CountingVariates:
    """Wrapper that counts scalar uniform draws per slot (draw-budget audits)."""

    def __init__(self, base):
        self.base = base
        self.seed = base.seed
        self.counts: dict[Slot, int] = {}

    def _note(self, slot: Slot, result: np.ndarray, n_uniforms: int = 1) -> None:
        size = int(np.asarray(result).size) * n_uniforms
        self.counts[slot] = self.counts.get(slot, 0) + size

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    def uniform(self, d, k, slot: Slot, counter=0):
        out = self.base.uniform(d, k, slot, counter)
        self._note(slot, out)
        return out

    def gamma21(self, d, k, slot: Slot, counter=0):
        out = self.base.gamma21(d, k, slot, counter)
        self._note(slot, out, n_uniforms=2)
        return out

    def exp1(self, d, k, slot: Slot, counter=0):
        out = self.base.exp1(d, k, slot, counter)
        self._note(slot, out)
        return out

    def beta21(self, d, k, slot: Slot, counter=0):
        out = self.base.beta21(d, k, slot, counter)
        self._note(slot, out)
        return out

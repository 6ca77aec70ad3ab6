"""Domain types: weighted sets, sample codes, fingerprints, configuration.

A weighted set maps element ids from a fixed universe to positive real
weights. A sketcher turns a set into a fingerprint, a length-D vector of
sample codes, and two fingerprints estimate similarity by the fraction of
positions whose codes are equal. The code variants mirror what each algorithm
family actually emits; equality on the real-valued variant is bit-exact on the
float's representation, never approximate.

This module also owns the two wire formats: the textual dataset file and the
little-endian binary fingerprint stream.
"""

from __future__ import annotations

import enum
import struct
from dataclasses import dataclass, field
from typing import Iterable, Mapping, NamedTuple, Sequence, Union

import numpy as np

__all__ = [
    "SketchError",
    "IndexOutOfRange",
    "DuplicateIndex",
    "NegativeWeight",
    "NonFiniteWeight",
    "EmptySet",
    "EmptyDataset",
    "EmptyQuantization",
    "BothEmpty",
    "UniverseMismatch",
    "AlgorithmMismatch",
    "LengthMismatch",
    "SeedMismatch",
    "MalformedStream",
    "BoundExceeded",
    "MissingBounds",
    "StepOverflow",
    "InvalidParams",
    "UnknownAlgorithm",
    "CodeVariant",
    "MinValue",
    "IndexSub",
    "IndexY",
    "IndexOnly",
    "StepCount",
    "SampleCode",
    "SENTINEL_ELEMENT",
    "WeightedSet",
    "make_weighted_set",
    "binarize",
    "SketchConfig",
    "Fingerprint",
    "ALGORITHM_NAMES",
    "algorithm_tag",
    "algorithm_variant",
    "fingerprint_to_bytes",
    "fingerprint_from_bytes",
    "write_fingerprint_file",
    "read_fingerprint_file",
    "write_dataset",
    "read_dataset",
]


# ---------------------------------------------------------------------------
# errors

class SketchError(Exception):
    """Base class for all library errors."""


class IndexOutOfRange(SketchError):
    pass


class DuplicateIndex(SketchError):
    pass


class NegativeWeight(SketchError):
    pass


class NonFiniteWeight(SketchError):
    pass


class EmptySet(SketchError):
    pass


class EmptyDataset(SketchError):
    pass


class EmptyQuantization(SketchError):
    """No element survives integer quantization at the configured scale."""


class BothEmpty(SketchError):
    """Similarity of two empty sets is undefined."""


class UniverseMismatch(SketchError):
    pass


class AlgorithmMismatch(SketchError):
    pass


class LengthMismatch(SketchError):
    pass


class SeedMismatch(SketchError):
    pass


class MalformedStream(SketchError):
    pass


class BoundExceeded(SketchError):
    """A weight exceeds its red-green layout bound."""


class MissingBounds(SketchError):
    pass


class StepOverflow(SketchError):
    """Red-green sampling exceeded the step cap without acceptance."""


class InvalidParams(SketchError):
    pass


class UnknownAlgorithm(SketchError):
    pass


# ---------------------------------------------------------------------------
# sample codes

class CodeVariant(enum.Enum):
    MIN_VALUE = "min_value"
    INDEX_SUB = "index_sub"
    INDEX_Y = "index_y"
    INDEX_ONLY = "index_only"
    STEP_COUNT = "step_count"


class MinValue(NamedTuple):
    """Minimum permuted index (integer minhash value)."""

    v: int


class IndexSub(NamedTuple):
    """Winning (element, subelement) pair of a quantization sketcher."""

    k: int
    i: int


class IndexY(NamedTuple):
    """Winning element and its sampled weight level; equality is bit-exact."""

    k: int
    y: float


class IndexOnly(NamedTuple):
    """Winning element id alone."""

    k: int


class StepCount(NamedTuple):
    """First accepted step index of the red-green walk."""

    t: int


SampleCode = Union[MinValue, IndexSub, IndexY, IndexOnly, StepCount]

# Reserved element id marking a hash slot with no surviving candidate.
# Sentinel codes never compare equal to anything, themselves included.
SENTINEL_ELEMENT = 0xFFFFFFFF


# ---------------------------------------------------------------------------
# weighted sets

@dataclass(frozen=True)
class WeightedSet:
    """Immutable sparse weighted set over a fixed universe.

    ``indices`` is strictly increasing uint32, ``weights`` matches it
    elementwise with finite positive float64 entries. Use
    :func:`make_weighted_set` instead of constructing directly.
    """

    universe_size: int
    indices: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        if self.universe_size <= 0:
            raise InvalidParams("universe_size must be positive")
        if len(self.indices) != len(self.weights):
            raise InvalidParams("indices and weights length mismatch")
        self.indices.setflags(write=False)
        self.weights.setflags(write=False)

    def __len__(self) -> int:
        return len(self.indices)

    @property
    def is_empty(self) -> bool:
        return len(self.indices) == 0

    def to_dict(self) -> dict[int, float]:
        return {int(k): float(w) for k, w in zip(self.indices, self.weights)}

    def total_weight(self) -> float:
        return float(self.weights.sum())


def make_weighted_set(universe_size: int,
                      entries: Mapping[int, float] | Iterable[tuple[int, float]]) -> WeightedSet:
    """Build a validated WeightedSet from (element, weight) pairs.

    Zero weights are dropped; negative, NaN or infinite weights and duplicate
    or out-of-range indices are rejected. The empty set is representable
    (sketchers reject it at their own boundary).
    """
    pairs = list(entries.items()) if isinstance(entries, Mapping) else list(entries)
    idx = np.array([p[0] for p in pairs], dtype=np.int64)
    wts = np.array([p[1] for p in pairs], dtype=np.float64)

    if idx.size:
        if idx.min() < 0 or idx.max() >= universe_size:
            bad = idx[(idx < 0) | (idx >= universe_size)][0]
            raise IndexOutOfRange(f"element {bad} outside universe [0, {universe_size})")
        if np.unique(idx).size != idx.size:
            raise DuplicateIndex("duplicate element ids in input")
        if np.isnan(wts).any() or np.isinf(wts).any():
            raise NonFiniteWeight("weights must be finite")
        if (wts < 0).any():
            raise NegativeWeight("weights must be nonnegative")

    keep = wts > 0
    idx, wts = idx[keep], wts[keep]
    order = np.argsort(idx)
    return WeightedSet(universe_size,
                       idx[order].astype(np.uint32),
                       np.ascontiguousarray(wts[order]))


def binarize(s: WeightedSet) -> WeightedSet:
    """Replace every weight with 1.0 (support indicator)."""
    return WeightedSet(s.universe_size, s.indices.copy(),
                       np.ones(len(s), dtype=np.float64))


# ---------------------------------------------------------------------------
# configuration

def _is_prime(n: int) -> bool:
    # deterministic Miller-Rabin, valid for all 64-bit inputs
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d, r = n - 1, 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


DEFAULT_QUANT_SCALE = 1000
DEFAULT_PERM_PRIME = 2_147_483_647  # 2^31 - 1; keeps a*k + b inside uint64


@dataclass(frozen=True)
class SketchConfig:
    """Shared sketcher configuration.

    ``quant_scale`` is the integer-quantization scale C of the quantization
    family. ``perm_prime`` is the modulus of the linear-congruential
    permutation; coefficients are drawn uniformly from (0, perm_prime) per
    hash. ``element_bounds`` optionally carries per-element upper bounds for
    the red-green sketcher.
    """

    num_hashes: int
    seed: int
    quant_scale: int = DEFAULT_QUANT_SCALE
    perm_prime: int = DEFAULT_PERM_PRIME
    element_bounds: Mapping[int, float] | None = field(default=None)

    def __post_init__(self):
        if self.num_hashes < 1:
            raise InvalidParams("num_hashes must be >= 1")
        if self.quant_scale < 1:
            raise InvalidParams("quant_scale must be >= 1")
        if not _is_prime(self.perm_prime):
            raise InvalidParams(f"perm_prime {self.perm_prime} is not prime")


# ---------------------------------------------------------------------------
# fingerprints

ALGORITHM_NAMES = (
    "minhash",
    "haveliwala",
    "haeupler",
    "gollapudi-int",
    "cws",
    "icws",
    "0bit",
    "ccws",
    "pcws",
    "i2cws",
    "gollapudi-threshold",
    "chum",
    "shrivastava",
)

_ALGO_TAG: dict[str, int] = {name: i + 1 for i, name in enumerate(ALGORITHM_NAMES)}
_TAG_ALGO: dict[int, str] = {v: k for k, v in _ALGO_TAG.items()}

_ALGO_VARIANT: dict[str, CodeVariant] = {
    "minhash": CodeVariant.MIN_VALUE,
    "haveliwala": CodeVariant.INDEX_SUB,
    "haeupler": CodeVariant.INDEX_SUB,
    "gollapudi-int": CodeVariant.INDEX_SUB,
    "cws": CodeVariant.INDEX_Y,
    "icws": CodeVariant.INDEX_Y,
    "0bit": CodeVariant.INDEX_ONLY,
    "ccws": CodeVariant.INDEX_Y,
    "pcws": CodeVariant.INDEX_Y,
    "i2cws": CodeVariant.INDEX_Y,
    "gollapudi-threshold": CodeVariant.INDEX_ONLY,
    "chum": CodeVariant.INDEX_ONLY,
    "shrivastava": CodeVariant.STEP_COUNT,
}


def algorithm_tag(name: str) -> int:
    try:
        return _ALGO_TAG[name]
    except KeyError:
        raise UnknownAlgorithm(
            f"unknown algorithm {name!r}; valid names: {', '.join(ALGORITHM_NAMES)}"
        ) from None


def algorithm_variant(name: str) -> CodeVariant:
    algorithm_tag(name)
    return _ALGO_VARIANT[name]


# array storage per variant: ks (element ids, uint32) and vals (payload)
_VAL_DTYPE: dict[CodeVariant, np.dtype | None] = {
    CodeVariant.MIN_VALUE: np.dtype("<u8"),
    CodeVariant.INDEX_SUB: np.dtype("<u8"),
    CodeVariant.INDEX_Y: np.dtype("<f8"),
    CodeVariant.INDEX_ONLY: None,
    CodeVariant.STEP_COUNT: np.dtype("<u8"),
}
_HAS_KS = {
    CodeVariant.MIN_VALUE: False,
    CodeVariant.INDEX_SUB: True,
    CodeVariant.INDEX_Y: True,
    CodeVariant.INDEX_ONLY: True,
    CodeVariant.STEP_COUNT: False,
}


@dataclass(frozen=True)
class Fingerprint:
    """Length-D vector of sample codes plus provenance (algorithm, seed).

    Codes are stored column-wise (element-id array and payload array) so that
    collision estimation over many pairs stays a vector operation; the
    ``codes`` accessor materializes the tagged-union view.
    """

    algo: str
    num_hashes: int
    seed: int
    ks: np.ndarray | None
    vals: np.ndarray | None

    def __post_init__(self):
        variant = algorithm_variant(self.algo)
        if _HAS_KS[variant]:
            if self.ks is None or len(self.ks) != self.num_hashes:
                raise InvalidParams("element-id array must have one entry per hash")
            self.ks.setflags(write=False)
        elif self.ks is not None:
            raise InvalidParams(f"variant {variant} carries no element ids")
        if _VAL_DTYPE[variant] is not None:
            if self.vals is None or len(self.vals) != self.num_hashes:
                raise InvalidParams("payload array must have one entry per hash")
            self.vals.setflags(write=False)
        elif self.vals is not None:
            raise InvalidParams(f"variant {variant} carries no payload")

    @property
    def variant(self) -> CodeVariant:
        return algorithm_variant(self.algo)

    def __len__(self) -> int:
        return self.num_hashes

    def is_sentinel(self) -> np.ndarray:
        """Boolean mask of hash slots holding the reserved sentinel code."""
        if self.ks is None:
            return np.zeros(self.num_hashes, dtype=bool)
        return self.ks == np.uint32(SENTINEL_ELEMENT)

    def code(self, d: int) -> SampleCode:
        variant = self.variant
        if variant is CodeVariant.MIN_VALUE:
            return MinValue(int(self.vals[d]))
        if variant is CodeVariant.INDEX_SUB:
            return IndexSub(int(self.ks[d]), int(self.vals[d]))
        if variant is CodeVariant.INDEX_Y:
            return IndexY(int(self.ks[d]), float(self.vals[d]))
        if variant is CodeVariant.INDEX_ONLY:
            return IndexOnly(int(self.ks[d]))
        return StepCount(int(self.vals[d]))

    @property
    def codes(self) -> list[SampleCode]:
        return [self.code(d) for d in range(self.num_hashes)]

    def __eq__(self, other) -> bool:
        if not isinstance(other, Fingerprint):
            return NotImplemented
        if (self.algo, self.num_hashes, self.seed) != (other.algo, other.num_hashes, other.seed):
            return False
        if (self.ks is None) != (other.ks is None) or (self.vals is None) != (other.vals is None):
            return False
        if self.ks is not None and not np.array_equal(self.ks, other.ks):
            return False
        if self.vals is not None:
            a, b = self.vals, other.vals
            if a.dtype.kind == "f":
                # bit-exact, NaN-proof comparison
                return bool(np.array_equal(a.view("<u8"), b.view("<u8")))
            return bool(np.array_equal(a, b))
        return True


# ---------------------------------------------------------------------------
# fingerprint wire format
#
# Single fingerprint stream (little endian throughout):
#   u8  algorithm tag (1..13, see ALGORITHM_NAMES order)
#   u32 D (number of hashes)
#   u64 seed
#   codes, D records, layout by variant:
#     min_value:  u64 value
#     index_sub:  u32 element, u64 subelement
#     index_y:    u32 element, f64 y (raw bit pattern)
#     index_only: u32 element
#     step_count: u64 step
#   sentinel slots store element id 0xFFFFFFFF (payload zeroed).
#
# Fingerprint file: magic "WMHF", u8 format version (1), u32 count, then the
# fingerprints back to back.

_FILE_MAGIC = b"WMHF"
_FILE_VERSION = 1


def fingerprint_to_bytes(fp: Fingerprint) -> bytes:
    variant = fp.variant
    head = struct.pack("<BIQ", algorithm_tag(fp.algo), fp.num_hashes, fp.seed & (2**64 - 1))
    parts = [head]
    if _HAS_KS[variant]:
        ks = np.ascontiguousarray(fp.ks, dtype="<u4")
        if _VAL_DTYPE[variant] is not None:
            vals = np.ascontiguousarray(fp.vals, dtype=_VAL_DTYPE[variant])
            inter = np.zeros(fp.num_hashes,
                             dtype=np.dtype([("k", "<u4"), ("v", _VAL_DTYPE[variant])]))
            inter["k"] = ks
            inter["v"] = vals
            parts.append(inter.tobytes())
        else:
            parts.append(ks.tobytes())
    else:
        parts.append(np.ascontiguousarray(fp.vals, dtype=_VAL_DTYPE[variant]).tobytes())
    return b"".join(parts)


def _record_size(variant: CodeVariant) -> int:
    k = 4 if _HAS_KS[variant] else 0
    v = _VAL_DTYPE[variant].itemsize if _VAL_DTYPE[variant] is not None else 0
    return k + v


def _parse_fingerprint(buf: bytes, offset: int, expected_algo: str | None):
    if len(buf) - offset < 13:
        raise MalformedStream("truncated fingerprint header")
    tag, d, seed = struct.unpack_from("<BIQ", buf, offset)
    offset += 13
    algo = _TAG_ALGO.get(tag)
    if algo is None:
        raise MalformedStream(f"unknown algorithm tag {tag}")
    if expected_algo is not None and algo != expected_algo:
        raise AlgorithmMismatch(f"expected {expected_algo!r}, stream holds {algo!r}")
    variant = algorithm_variant(algo)
    nbytes = _record_size(variant) * d
    if len(buf) - offset < nbytes:
        raise MalformedStream("truncated code block")
    block = buf[offset:offset + nbytes]
    offset += nbytes
    ks = vals = None
    if _HAS_KS[variant]:
        if _VAL_DTYPE[variant] is not None:
            rec = np.frombuffer(block, dtype=np.dtype([("k", "<u4"), ("v", _VAL_DTYPE[variant])]))
            ks = rec["k"].copy()
            vals = rec["v"].copy()
        else:
            ks = np.frombuffer(block, dtype="<u4").copy()
    else:
        vals = np.frombuffer(block, dtype=_VAL_DTYPE[variant]).copy()
    return Fingerprint(algo, d, seed, ks, vals), offset


def fingerprint_from_bytes(buf: bytes, expected_algo: str | None = None) -> Fingerprint:
    """Parse a single fingerprint; the buffer must contain exactly one."""
    fp, end = _parse_fingerprint(buf, 0, expected_algo)
    if end != len(buf):
        raise MalformedStream(f"{len(buf) - end} trailing bytes after codes")
    return fp


def write_fingerprint_file(path, fps: Sequence[Fingerprint]) -> None:
    with open(path, "wb") as fh:
        fh.write(_FILE_MAGIC)
        fh.write(struct.pack("<BI", _FILE_VERSION, len(fps)))
        for fp in fps:
            fh.write(fingerprint_to_bytes(fp))


def read_fingerprint_file(path, expected_algo: str | None = None) -> list[Fingerprint]:
    with open(path, "rb") as fh:
        buf = fh.read()
    if len(buf) < 9 or buf[:4] != _FILE_MAGIC:
        raise MalformedStream("not a fingerprint file")
    version, count = struct.unpack_from("<BI", buf, 4)
    if version != _FILE_VERSION:
        raise MalformedStream(f"unsupported fingerprint file version {version}")
    offset = 9
    out = []
    for _ in range(count):
        fp, offset = _parse_fingerprint(buf, offset, expected_algo)
        out.append(fp)
    if offset != len(buf):
        raise MalformedStream("trailing bytes after last fingerprint")
    return out


# ---------------------------------------------------------------------------
# dataset text format
#
#   #universe <n>
#   #bounds k:w k:w ...        (optional, red-green layout bounds)
#   k:w k:w ...                (one set per line; blank line = empty set)

def write_dataset(path, sets: Sequence[WeightedSet],
                  bounds: Mapping[int, float] | None = None) -> None:
    if not sets:
        raise EmptyDataset("refusing to write a dataset with no sets")
    universe = sets[0].universe_size
    for s in sets:
        if s.universe_size != universe:
            raise UniverseMismatch("sets disagree on universe size")
    with open(path, "w", encoding="ascii") as fh:
        fh.write(f"#universe {universe}\n")
        if bounds is not None:
            token = " ".join(f"{int(k)}:{float(v)!r}" for k, v in sorted(bounds.items()))
            fh.write(f"#bounds {token}\n")
        for s in sets:
            fh.write(" ".join(f"{int(k)}:{float(w)!r}"
                              for k, w in zip(s.indices, s.weights)) + "\n")


def _parse_pairs(tokens: list[str], lineno: int) -> list[tuple[int, float]]:
    pairs = []
    for tok in tokens:
        try:
            k_str, w_str = tok.split(":", 1)
            pairs.append((int(k_str), float(w_str)))
        except ValueError:
            raise MalformedStream(f"line {lineno}: bad token {tok!r}") from None
    return pairs


def read_dataset(path) -> tuple[list[WeightedSet], dict[int, float] | None]:
    """Read a dataset file; returns (sets, bounds-or-None)."""
    with open(path, "r", encoding="ascii") as fh:
        lines = fh.read().splitlines()
    if not lines or not lines[0].startswith("#universe "):
        raise MalformedStream("missing #universe header")
    try:
        universe = int(lines[0].split()[1])
    except (IndexError, ValueError):
        raise MalformedStream("bad #universe header") from None
    bounds = None
    body_start = 1
    if len(lines) > 1 and lines[1].startswith("#bounds"):
        bounds = dict(_parse_pairs(lines[1].split()[1:], 2))
        body_start = 2
    sets = []
    for off, line in enumerate(lines[body_start:]):
        tokens = line.split()
        sets.append(make_weighted_set(universe, _parse_pairs(tokens, body_start + off + 1)))
    if not sets:
        raise EmptyDataset("dataset holds no sets")
    return sets, bounds

"""Exact similarity oracles that every sketcher is measured against."""

from __future__ import annotations

import numpy as np

from .core import BothEmpty, UniverseMismatch, WeightedSet

__all__ = ["jaccard", "generalized_jaccard"]


def _check(a: WeightedSet, b: WeightedSet) -> None:
    if a.universe_size != b.universe_size:
        raise UniverseMismatch(
            f"universe sizes differ: {a.universe_size} vs {b.universe_size}")
    if a.is_empty and b.is_empty:
        raise BothEmpty("similarity of two empty sets is undefined")


def jaccard(a: WeightedSet, b: WeightedSet) -> float:
    """Set resemblance |A n B| / |A u B| of the supports (weights ignored)."""
    _check(a, b)
    inter = np.intersect1d(a.indices, b.indices, assume_unique=True).size
    union = a.indices.size + b.indices.size - inter
    return inter / union


def generalized_jaccard(a: WeightedSet, b: WeightedSet) -> float:
    """Weighted resemblance sum_k min(A_k, B_k) / sum_k max(A_k, B_k).

    Reduces to :func:`jaccard` on binary weights; scale-invariant under a
    common positive rescaling of both sets.
    """
    _check(a, b)
    union_idx = np.union1d(a.indices, b.indices)
    wa = np.zeros(union_idx.size)
    wb = np.zeros(union_idx.size)
    wa[np.searchsorted(union_idx, a.indices)] = a.weights
    wb[np.searchsorted(union_idx, b.indices)] = b.weights
    return float(np.minimum(wa, wb).sum() / np.maximum(wa, wb).sum())

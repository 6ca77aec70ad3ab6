"""Synthetic sparse power-law datasets.

Each document picks a fixed number of distinct feature indices uniformly at
random and weights them with Pareto-type variates: w = s * u^(-1/(e-1)),
which has shape e-1 and scale s, so all weights are at least s and the mean
exists whenever e > 2. Determinism comes from keyed variates: document d uses
draws keyed (d, position), so regenerating with the same params is
byte-identical and documents are independent of each other.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import EmptyDataset, InvalidParams, WeightedSet
from .variates import KeyedVariates, Slot

__all__ = ["GenParams", "generate", "stats"]


@dataclass(frozen=True)
class GenParams:
    num_docs: int
    num_features: int
    density: float
    exponent: float = 3.0
    scale: float = 0.2
    seed: int = 0

    def __post_init__(self):
        if self.num_docs < 1:
            raise InvalidParams("num_docs must be >= 1")
        if self.num_features < 1:
            raise InvalidParams("num_features must be >= 1")
        if not 0.0 < self.density <= 1.0:
            raise InvalidParams("density must be in (0, 1]")
        if int(self.density * self.num_features) < 1:
            raise InvalidParams("density * num_features must be >= 1")
        if self.exponent <= 2.0:
            raise InvalidParams("exponent must exceed 2 so the mean exists")
        if self.scale <= 0.0:
            raise InvalidParams("scale must be positive")

    @property
    def nnz_per_doc(self) -> int:
        return int(self.density * self.num_features)


def _doc_indices(source: KeyedVariates, doc: int, nnz: int,
                 num_features: int) -> np.ndarray:
    """Distinct feature ids via a sparse partial Fisher-Yates pass."""
    u = source.uniform(doc, np.arange(nnz), Slot.GEN_IDX)
    # virtual array 0..F-1; state holds only displaced entries
    state: dict[int, int] = {}
    picked = np.empty(nnz, dtype=np.int64)
    for t in range(nnz):
        j = t + int(u[t] * (num_features - t))
        picked[t] = state.get(j, j)
        state[j] = state.get(t, t)
    return picked


def generate(params: GenParams) -> list[WeightedSet]:
    """Dataset of num_docs weighted sets over a num_features universe."""
    source = KeyedVariates(params.seed)
    nnz = params.nnz_per_doc
    inv_shape = 1.0 / (params.exponent - 1.0)
    docs = []
    for doc in range(params.num_docs):
        idx = _doc_indices(source, doc, nnz, params.num_features)
        u = source.uniform(doc, np.arange(nnz), Slot.GEN_W)
        w = params.scale * u ** (-inv_shape)
        order = np.argsort(idx)
        docs.append(WeightedSet(params.num_features,
                                idx[order].astype(np.uint32),
                                np.ascontiguousarray(w[order])))
    return docs


def stats(dataset: list[WeightedSet]) -> tuple[float, float, float]:
    """(average density, average mean weight, average weight std).

    Per-document statistics averaged over documents; std is the population
    standard deviation, so single-element documents contribute zero.
    """
    if not dataset:
        raise EmptyDataset("stats of an empty dataset")
    densities = [len(s) / s.universe_size for s in dataset]
    means = [float(s.weights.mean()) for s in dataset]
    stds = [float(s.weights.std()) for s in dataset]
    return (float(np.mean(densities)), float(np.mean(means)),
            float(np.mean(stds)))

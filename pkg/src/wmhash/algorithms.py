"""Name-based dispatch over the thirteen sketchers.

Central lookup for CLI and bindings; the per-family modules stay importable
on their own. The only sketcher with an extra input is shrivastava, which
needs a red-green layout; ``sketch`` builds one from cfg.element_bounds when
the caller does not pass a layout explicitly.
"""

from __future__ import annotations

from .core import (
    ALGORITHM_NAMES,
    Fingerprint,
    MissingBounds,
    SketchConfig,
    UnknownAlgorithm,
    WeightedSet,
    algorithm_tag,
    binarize,
)
from .sketch_cws import (
    sketch_0bit,
    sketch_ccws,
    sketch_cws,
    sketch_i2cws,
    sketch_icws,
    sketch_pcws,
)
from .sketch_misc import (
    RedGreenLayout,
    layout_from_bounds,
    sketch_chum,
    sketch_gollapudi_threshold,
    sketch_shrivastava,
)
from .sketch_quant import (
    sketch_gollapudi_int,
    sketch_haeupler,
    sketch_haveliwala,
    sketch_minhash,
)

__all__ = ["SKETCHERS", "needs_layout", "sketch"]

SKETCHERS = {
    "minhash": sketch_minhash,
    "haveliwala": sketch_haveliwala,
    "haeupler": sketch_haeupler,
    "gollapudi-int": sketch_gollapudi_int,
    "cws": sketch_cws,
    "icws": sketch_icws,
    "0bit": sketch_0bit,
    "ccws": sketch_ccws,
    "pcws": sketch_pcws,
    "i2cws": sketch_i2cws,
    "gollapudi-threshold": sketch_gollapudi_threshold,
    "chum": sketch_chum,
    "shrivastava": sketch_shrivastava,
}

assert set(SKETCHERS) == set(ALGORITHM_NAMES)


def needs_layout(algo: str) -> bool:
    algorithm_tag(algo)  # raises UnknownAlgorithm with the full name list
    return algo == "shrivastava"


def sketch(algo: str, s: WeightedSet, cfg: SketchConfig,
           layout: RedGreenLayout | None = None) -> Fingerprint:
    """Sketch one set with the named algorithm.

    minhash receives the binarized support, matching its role as the
    unweighted baseline. For shrivastava a layout is required, either passed
    directly or as cfg.element_bounds.
    """
    if algo not in SKETCHERS:
        raise UnknownAlgorithm(
            f"unknown algorithm {algo!r}; valid names: {', '.join(ALGORITHM_NAMES)}")
    if algo == "shrivastava":
        if layout is None:
            if cfg.element_bounds is None:
                raise MissingBounds(
                    "shrivastava requires a red-green layout "
                    "(pass layout= or set cfg.element_bounds)")
            layout = layout_from_bounds(cfg.element_bounds)
        return sketch_shrivastava(s, layout, cfg)
    if algo == "minhash":
        return sketch_minhash(binarize(s), cfg)
    return SKETCHERS[algo](s, cfg)

"""Weighted minhash sketching library.

Thirteen sketchers behind one fingerprint interface, a generalized Jaccard
oracle, keyed deterministic variates, a synthetic dataset generator, and an
MSE benchmark harness. See README.md for the map.
"""

from .algorithms import SKETCHERS, needs_layout, sketch
from .core import (
    ALGORITHM_NAMES,
    AlgorithmMismatch,
    BothEmpty,
    BoundExceeded,
    CodeVariant,
    DuplicateIndex,
    EmptyDataset,
    EmptyQuantization,
    EmptySet,
    Fingerprint,
    IndexOnly,
    IndexOutOfRange,
    IndexSub,
    IndexY,
    InvalidParams,
    LengthMismatch,
    MalformedStream,
    MinValue,
    MissingBounds,
    NegativeWeight,
    NonFiniteWeight,
    SENTINEL_ELEMENT,
    SampleCode,
    SeedMismatch,
    SketchConfig,
    SketchError,
    StepCount,
    StepOverflow,
    UniverseMismatch,
    UnknownAlgorithm,
    WeightedSet,
    algorithm_tag,
    algorithm_variant,
    binarize,
    fingerprint_from_bytes,
    fingerprint_to_bytes,
    make_weighted_set,
    read_dataset,
    read_fingerprint_file,
    write_dataset,
    write_fingerprint_file,
)
from .datagen import GenParams, generate, stats
from .estimate import (
    BenchReport,
    BenchRow,
    DEFAULT_D_GRID,
    collision_similarity,
    mse,
    run_benchmark,
    select_pairs,
)
from .oracle import generalized_jaccard, jaccard
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
    build_layout,
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
from .variates import (
    CountingVariates,
    KeyedVariates,
    MatrixVariates,
    Slot,
    VariateKey,
    derive_seed,
)

__version__ = "0.1.0"

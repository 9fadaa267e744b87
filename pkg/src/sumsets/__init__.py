"""Exact h-fold sumset sizes of finite integer sets."""

__version__ = "0.1.0"

from .core import (
    AffineMap,
    ArithmeticOverflowError,
    DomainError,
    GuardExceededError,
    InconsistencyError,
    IntSet,
    SizeBounds,
    SumsetError,
    as_intset,
    binomial,
    canonical_form,
    h_fold_sumset,
    h_fold_sumset_naive,
    h_fold_sumset_size,
    is_arithmetic_progression,
    is_b_h_set,
    normalize,
    reflect,
    size_bounds,
    sumset,
    tetrahedral,
)
from .construction import (
    IntervalRun,
    LayerDecomposition,
    PopularFamily,
    VerificationReport,
    disjointness_threshold,
    layer_intersection_size,
    layer_intervals,
    layer_size_formula,
    popular_set,
    popular_targets,
    predicted_popular_size,
    verify_theorem,
)
from .explorer import (
    RangeReport,
    SearchSpace,
    closed_form_range,
    enumerate_sizes,
    popularity_histogram,
    problem1_scan,
    problem2_scan,
)

"""Wilf equivalence and Wilf collapse in permutation classes with finitely many sum-indecomposables."""

from .automaton import (
    AlphabetNotFinite,
    ClassModel,
    ClassSpecError,
    LemmaViolation,
    NotInClassError,
    build_class,
    class_count,
    dominance,
    growth,
    load_class,
    prefix_transition,
    suffix_transition,
)
from .perm import (
    BACKEND,
    Permutation,
    apply_symmetry,
    complement,
    contains,
    direct_sum,
    inverse,
    is_sum_indecomposable,
    reverse,
    skew_sum,
    sum_decompose,
)
from .sampler import RandomSource, boltzmann_sample, build_sampler, empirical_suite, uniform_class_sample
from .series import TruncatedSeries
from .wilf import (
    avoider_series,
    collapse_report,
    move_poly,
    partition_horizon,
    shuffle_equivalents,
    signature_horizon,
    symmetry_orbit,
    verify_predictions,
    wilf_partition,
)
from .words import Alphabet, Letter, Word, count_disjoint_blocks, series_I, series_I_star, shuffle_orbit

__version__ = "0.1.0"

__all__ = [
    "Alphabet",
    "AlphabetNotFinite",
    "apply_symmetry",
    "avoider_series",
    "BACKEND",
    "boltzmann_sample",
    "build_class",
    "build_sampler",
    "class_count",
    "ClassModel",
    "ClassSpecError",
    "collapse_report",
    "complement",
    "contains",
    "count_disjoint_blocks",
    "direct_sum",
    "dominance",
    "empirical_suite",
    "growth",
    "inverse",
    "is_sum_indecomposable",
    "LemmaViolation",
    "Letter",
    "load_class",
    "move_poly",
    "partition_horizon",
    "NotInClassError",
    "Permutation",
    "prefix_transition",
    "RandomSource",
    "reverse",
    "series_I",
    "series_I_star",
    "shuffle_equivalents",
    "shuffle_orbit",
    "signature_horizon",
    "skew_sum",
    "suffix_transition",
    "sum_decompose",
    "symmetry_orbit",
    "TruncatedSeries",
    "uniform_class_sample",
    "verify_predictions",
    "wilf_partition",
    "Word",
]

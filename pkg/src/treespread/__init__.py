"""Exact combinatorics for t-intersecting families of spanning trees."""

from __future__ import annotations

from .errors import (
    InvalidInput,
    InvariantViolation,
    OutOfScope,
    PreconditionViolation,
    ResourceLimit,
    TreespreadError,
    UndefinedRatio,
)
from .extremal import (
    ConstructionSpec,
    construct,
    max_t_intersecting_exact,
    restriction_size_classification,
    verify_main_bound,
)
from .family import (
    SetFamily,
    binom_upper_bound,
    concentration,
    is_t_intersecting,
    quotient,
    restrict,
    restrict_over_family,
    spanning_tree_family,
    spread_lemma_empirical,
    spreadness_check,
)
from .lll import (
    EventSystem,
    avoiding_fraction_bound,
    build_dependency_graph,
    degree_condition_holds,
    event_probability,
    lll_bound,
    verify_independence,
    verify_negative_dependency,
)
from .spread import (
    argmax_weighted_restriction,
    density_boost_search,
    find_spread_restriction,
    spread_approximation,
    verify_structure_bound,
)
from .trees import (
    Edge,
    Forest,
    LabeledTree,
    count_containing,
    count_containing_avoiding,
    count_star_like_trees,
    enumerate_trees,
    matrix_tree_count,
    prufer_decode,
    prufer_encode,
    sample_trees_containing,
    tree_degree_weight_sum,
)

__version__ = "0.1.0"

__all__ = [
    "ConstructionSpec",
    "Edge",
    "EventSystem",
    "Forest",
    "InvalidInput",
    "InvariantViolation",
    "LabeledTree",
    "OutOfScope",
    "PreconditionViolation",
    "ResourceLimit",
    "SetFamily",
    "TreespreadError",
    "UndefinedRatio",
    "argmax_weighted_restriction",
    "avoiding_fraction_bound",
    "binom_upper_bound",
    "build_dependency_graph",
    "concentration",
    "construct",
    "count_containing",
    "count_containing_avoiding",
    "count_star_like_trees",
    "degree_condition_holds",
    "density_boost_search",
    "enumerate_trees",
    "event_probability",
    "find_spread_restriction",
    "is_t_intersecting",
    "lll_bound",
    "matrix_tree_count",
    "max_t_intersecting_exact",
    "prufer_decode",
    "prufer_encode",
    "quotient",
    "restrict",
    "restrict_over_family",
    "restriction_size_classification",
    "sample_trees_containing",
    "spanning_tree_family",
    "spread_approximation",
    "spread_lemma_empirical",
    "spreadness_check",
    "tree_degree_weight_sum",
    "verify_independence",
    "verify_main_bound",
    "verify_negative_dependency",
    "verify_structure_bound",
]

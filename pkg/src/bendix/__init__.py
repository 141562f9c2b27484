"""Bending tori of polygon spaces, in exact rational arithmetic.

The library computes the combinatorial invariants of the space of closed
polygons in 3-space with prescribed edge lengths: which edge subsets admit
smooth bending flows, which families of flows commute (bending sets), the
dimensions and maximality of the tori they generate, the exact images and
critical values of the bending functions, and, for toric actions, the moment
polytope together with its classification up to unimodular lattice
equivalence.
"""

from .bending import (
    BendingSet,
    Interval,
    ReductionResult,
    bending_set_from_json,
    critical_values,
    fill,
    is_full,
    is_regular_value,
    maximal_elements,
    member_split,
    moment_image,
    reduce,
    torus_dimension,
    validate_bending_set,
)
from .errors import BendixError
from .model import (
    LengthFunction,
    dominant_edge,
    format_rational,
    is_generic,
    is_lopsided,
    is_nonempty,
    parse_rational,
    pol_dimension,
    subset_from_json,
    subset_to_json,
)
from .polytope import (
    EquivalenceClassReport,
    LatticePolytope,
    NonbendingReport,
    conjugacy_classes,
    fingerprint,
    from_halfspaces,
    from_vertices,
    is_delzant,
    lattice_equivalent,
    moment_polytope,
    nonbending_report,
    volume,
)
from .search import (
    TheoremBStatus,
    TorusReport,
    common_point,
    enumerate_maximal_tori,
    is_maximal_bending,
    max_bending_dim,
    max_containing_dim,
    min_coarser_partition,
    min_lopsided_partition,
    theorem_b_status,
    toric_bending_sets,
    two_long_edge_pairs,
    two_long_edge_partition,
)

__version__ = "0.1.0"

__all__ = [
    "BendingSet",
    "BendixError",
    "EquivalenceClassReport",
    "Interval",
    "LatticePolytope",
    "LengthFunction",
    "NonbendingReport",
    "ReductionResult",
    "TheoremBStatus",
    "TorusReport",
    "bending_set_from_json",
    "common_point",
    "conjugacy_classes",
    "critical_values",
    "dominant_edge",
    "enumerate_maximal_tori",
    "fill",
    "fingerprint",
    "format_rational",
    "from_halfspaces",
    "from_vertices",
    "is_delzant",
    "is_full",
    "is_generic",
    "is_lopsided",
    "is_maximal_bending",
    "is_nonempty",
    "is_regular_value",
    "lattice_equivalent",
    "maximal_elements",
    "max_bending_dim",
    "max_containing_dim",
    "member_split",
    "min_coarser_partition",
    "min_lopsided_partition",
    "moment_image",
    "moment_polytope",
    "nonbending_report",
    "parse_rational",
    "pol_dimension",
    "reduce",
    "subset_from_json",
    "subset_to_json",
    "theorem_b_status",
    "toric_bending_sets",
    "torus_dimension",
    "two_long_edge_pairs",
    "two_long_edge_partition",
    "validate_bending_set",
    "volume",
]

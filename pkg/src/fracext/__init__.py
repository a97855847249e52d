"""Fractional matching extendability of graphs, with Cayley-graph classification scans."""

__version__ = "0.1.0"

from .groups import AbelianGroup, ConnectionSet, enumerate_abelian_groups, connection_set_orbit_reps
from .graphs import Graph, cayley_graph, circulant, bipartite_double_cover
from .matching import (
    DeficiencyWitness,
    EdgeOddCycleFactor,
    HalfIntegralAssignment,
    MatchingSpec,
    NotExtendable,
    fpm_no_witness,
    fpm_yes_witness,
    has_fpm,
    has_perfect_matching,
)
from .extendability import (
    ExtendabilityReport,
    is_fractional_t_extendable,
    is_t_extendable_classical,
    is_t_near_extendable,
)
from .classification import FamilyId, construct_family, recognize, verify_theorem, family_census

__all__ = [
    "AbelianGroup",
    "ConnectionSet",
    "DeficiencyWitness",
    "EdgeOddCycleFactor",
    "ExtendabilityReport",
    "FamilyId",
    "Graph",
    "HalfIntegralAssignment",
    "MatchingSpec",
    "NotExtendable",
    "bipartite_double_cover",
    "cayley_graph",
    "circulant",
    "connection_set_orbit_reps",
    "construct_family",
    "enumerate_abelian_groups",
    "family_census",
    "fpm_no_witness",
    "fpm_yes_witness",
    "has_fpm",
    "has_perfect_matching",
    "is_fractional_t_extendable",
    "is_t_extendable_classical",
    "is_t_near_extendable",
    "recognize",
    "verify_theorem",
]

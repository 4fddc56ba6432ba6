"""Multigraphs, perfect matchings and cuts."""
from app.graph.cuts import (
    ContractionResult,
    contract,
    contractions,
    is_separating_cut,
    is_tight_cut,
    phi,
    phi_profile,
)
from app.graph.matching import (
    covered_edges,
    enumerate_perfect_matchings,
    find_perfect_matching,
    has_perfect_matching,
    is_matching_covered,
    matching_covered_core,
    max_weight_perfect_matching,
    perfect_matching_with,
)
from app.graph.multigraph import Cut, Matching, MultiGraph, Subgraph

__all__ = [
    "ContractionResult",
    "Cut",
    "Matching",
    "MultiGraph",
    "Subgraph",
    "contract",
    "contractions",
    "covered_edges",
    "enumerate_perfect_matchings",
    "find_perfect_matching",
    "has_perfect_matching",
    "is_matching_covered",
    "is_separating_cut",
    "is_tight_cut",
    "matching_covered_core",
    "max_weight_perfect_matching",
    "perfect_matching_with",
    "phi",
    "phi_profile",
]

"""
Cut contraction and cut-crossing statistics.
"""
from dataclasses import dataclass
from typing import Iterable

from app.core.exceptions import PreconditionError
from app.graph.matching import is_matching_covered, max_weight_perfect_matching, perfect_matching_with
from app.graph.multigraph import Cut, MultiGraph


@dataclass(frozen=True)
class ContractionResult:
    """A shore shrunk to one vertex, with id maps back to the parent graph."""

    graph: MultiGraph
    vertex_map: tuple[int, ...]
    edge_map: tuple[int, ...]
    contracted_vertex: int

    def preimage(self, vertex: int, parent_n: int) -> frozenset[int]:
        return frozenset(v for v in range(parent_n) if self.vertex_map[v] == vertex)

    def lift_shore(self, vertices: Iterable[int], parent_n: int) -> frozenset[int]:
        """Parent vertices mapping into `vertices`."""
        wanted = set(vertices)
        return frozenset(v for v in range(parent_n) if self.vertex_map[v] in wanted)


def contract(g: MultiGraph, shore: Iterable[int]) -> ContractionResult:
    """
    Shrink `shore` to a single vertex.

    The new vertex takes the place of the smallest shore vertex; other vertices
    keep their relative order. Edges inside the shore are dropped, parallel
    edges are kept.
    """
    side = frozenset(shore)
    if not side or len(side) >= g.n or not side <= frozenset(range(g.n)):
        raise PreconditionError("contraction shore must be a proper non-empty vertex subset")

    anchor = min(side)
    vertex_map: list[int] = []
    nxt = 0
    contracted = -1
    for v in range(g.n):
        if v in side and v != anchor:
            vertex_map.append(-1)
            continue
        vertex_map.append(nxt)
        if v == anchor:
            contracted = nxt
        nxt += 1
    vertex_map = [contracted if v in side else image for v, image in enumerate(vertex_map)]

    edges: list[tuple[int, int]] = []
    edge_map: list[int] = []
    for eid, (a, b) in enumerate(g.edges):
        if a in side and b in side:
            continue
        edges.append((vertex_map[a], vertex_map[b]))
        edge_map.append(eid)

    return ContractionResult(
        graph=MultiGraph(nxt, tuple(edges)),
        vertex_map=tuple(vertex_map),
        edge_map=tuple(edge_map),
        contracted_vertex=contracted,
    )


def contractions(g: MultiGraph, c: Cut) -> tuple[ContractionResult, ContractionResult]:
    """Both c-contractions: shore shrunk first, then the complement shrunk."""
    return contract(g, c.shore), contract(g, c.complement)


def _cut_weights(g: MultiGraph, c: Cut) -> list[int]:
    return [1 if e in c.edge_ids else 0 for e in range(g.m)]


def phi(g: MultiGraph, c: Cut) -> int:
    """min over perfect matchings of |M ∩ C|."""
    best = max_weight_perfect_matching(g, _cut_weights(g, c), "min")
    if best is None:
        raise PreconditionError("phi needs a graph with a perfect matching")
    return best.crossings(c.edge_ids)


def max_crossing(g: MultiGraph, c: Cut) -> int:
    best = max_weight_perfect_matching(g, _cut_weights(g, c), "max")
    if best is None:
        raise PreconditionError("graph has no perfect matching")
    return best.crossings(c.edge_ids)


def phi_profile(g: MultiGraph, c: Cut) -> tuple[int, ...]:
    """
    Per-edge minimum crossing number: min{|M ∩ C| : e ∈ M}.

    Edges in no perfect matching get 0.
    """
    weights = _cut_weights(g, c)
    profile: list[int] = []
    for eid in range(g.m):
        best = perfect_matching_with(g, include=(eid,), weights=weights, sense="min")
        profile.append(0 if best is None else best.crossings(c.edge_ids))
    return tuple(profile)


def is_tight_cut(g: MultiGraph, c: Cut) -> bool:
    return max_crossing(g, c) == 1


def is_separating_cut(g: MultiGraph, c: Cut) -> bool:
    return all(is_matching_covered(part.graph)[0] for part in contractions(g, c))

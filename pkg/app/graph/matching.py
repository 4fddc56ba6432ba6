"""
Perfect matching primitives on multigraphs.
Blossom queries go through networkx; enumeration is a plain branching search.
"""
import logging
from functools import lru_cache
from typing import Iterable, Literal, Sequence

import networkx as nx

from app.core.exceptions import (
    EnumerationOverflowError,
    NoPerfectMatchingError,
    PreconditionError,
)
from app.graph.multigraph import Matching, MultiGraph, Subgraph

logger = logging.getLogger(__name__)

Sense = Literal["min", "max"]


def _optimal_matching(
    g: MultiGraph,
    weights: Sequence[int] | None,
    sense: Sense,
    available: Iterable[int],
    removed: frozenset[int] = frozenset(),
) -> Matching | None:
    """Optimal perfect matching of g - removed using only `available` edges."""
    alive = [v for v in range(g.n) if v not in removed]
    if len(alive) % 2:
        return None
    if not alive:
        return Matching(())

    # one representative per vertex pair: best weight, smallest id on ties
    best: dict[tuple[int, int], int] = {}
    for eid in sorted(available):
        a, b = g.edges[eid]
        if a in removed or b in removed:
            continue
        key = (min(a, b), max(a, b))
        w = weights[eid] if weights is not None else 0
        current = best.get(key)
        if current is None:
            best[key] = eid
            continue
        cw = weights[current] if weights is not None else 0
        if (sense == "max" and w > cw) or (sense == "min" and w < cw):
            best[key] = eid
    if not best:
        return None

    reps = sorted(best.values())
    values = [weights[e] if weights is not None else 0 for e in reps]
    low, high = min(values), max(values)

    graph = nx.Graph()
    graph.add_nodes_from(alive)
    for eid, w in zip(reps, values):
        a, b = g.edges[eid]
        # every perfect matching has the same size, so shifting by a constant keeps the optimum
        shifted = (w - low + 1) if sense == "max" else (high - w + 1)
        graph.add_edge(a, b, weight=shifted, eid=eid)

    pairs = nx.max_weight_matching(graph, maxcardinality=True, weight="weight")
    if 2 * len(pairs) != len(alive):
        return None
    return Matching(tuple(graph.edges[a, b]["eid"] for a, b in pairs))


def max_weight_perfect_matching(
    g: MultiGraph,
    weights: Sequence[int],
    sense: Sense = "max",
) -> Matching | None:
    """
    Perfect matching of optimal total weight, or None when g has none.

    Args:
        g: The multigraph
        weights: One exact integer weight per edge id
        sense: "max" or "min"
    """
    if len(weights) != g.m:
        raise PreconditionError("one weight per edge is required")
    return _optimal_matching(g, weights, sense, range(g.m))


def perfect_matching_with(
    g: MultiGraph,
    include: Iterable[int] = (),
    exclude: Iterable[int] = (),
    weights: Sequence[int] | None = None,
    sense: Sense = "max",
) -> Matching | None:
    """
    Perfect matching containing every edge of `include` and none of `exclude`.

    Deletes `exclude`, deletes the endpoints of `include` and matches the rest,
    optionally optimizing `weights` on the remainder.
    """
    inc = sorted(set(include))
    exc = set(exclude)
    if exc.intersection(inc):
        raise PreconditionError("include and exclude overlap", {"edges": sorted(exc.intersection(inc))})
    covered: set[int] = set()
    for eid in inc:
        a, b = g.edges[eid]
        if a in covered or b in covered:
            raise PreconditionError("include edges are not pairwise disjoint", {"edge": eid})
        covered.update((a, b))

    rest = _optimal_matching(
        g,
        weights,
        sense,
        (e for e in range(g.m) if e not in exc and e not in inc),
        removed=frozenset(covered),
    )
    if rest is None:
        return None
    return Matching(tuple(inc) + rest.edge_ids)


def has_perfect_matching(g: MultiGraph, removed: Iterable[int] = ()) -> bool:
    """Whether g minus the given vertices has a perfect matching."""
    return _optimal_matching(g, None, "max", range(g.m), frozenset(removed)) is not None


def find_perfect_matching(g: MultiGraph) -> Matching | None:
    return _optimal_matching(g, None, "max", range(g.m))


def enumerate_perfect_matchings(g: MultiGraph, cap: int) -> list[Matching]:
    """
    All perfect matchings in a deterministic order.

    Branches on the smallest uncovered vertex, trying its edges by ascending id.

    Raises:
        EnumerationOverflowError: When more than `cap` matchings exist
    """
    if cap < 1:
        raise PreconditionError("enumeration cap must be at least 1")
    if g.n % 2:
        return []

    found: list[Matching] = []
    covered = [False] * g.n
    chosen: list[int] = []

    def branch(start: int) -> None:
        v = start
        while v < g.n and covered[v]:
            v += 1
        if v == g.n:
            if len(found) >= cap:
                raise EnumerationOverflowError(cap)
            found.append(Matching(tuple(chosen)))
            return
        covered[v] = True
        for eid in g.incidence[v]:
            w = g.other_end(eid, v)
            if covered[w]:
                continue
            covered[w] = True
            chosen.append(eid)
            branch(v + 1)
            chosen.pop()
            covered[w] = False
        covered[v] = False

    branch(0)
    return found


def _pair(g: MultiGraph, eid: int) -> tuple[int, int]:
    a, b = g.edges[eid]
    return (a, b) if a < b else (b, a)


@lru_cache(maxsize=4096)
def covered_edges(g: MultiGraph) -> frozenset[int]:
    """Edges lying in at least one perfect matching (admissible edges)."""
    first = find_perfect_matching(g)
    if first is None:
        return frozenset()
    covered = set(first.edge_ids)
    # parallel copies share their pair's verdict
    pairs = {_pair(g, eid) for eid in covered}
    for eid in range(g.m):
        if eid in covered:
            continue
        if _pair(g, eid) in pairs:
            covered.add(eid)
            continue
        witness = perfect_matching_with(g, include=(eid,))
        if witness is not None:
            covered.update(witness.edge_ids)
            pairs.update(_pair(g, e) for e in witness.edge_ids)
    return frozenset(covered)


def is_matching_covered(g: MultiGraph) -> tuple[bool, tuple[int, ...]]:
    """
    Connected, has a perfect matching, and every edge lies in one.

    Returns:
        (verdict, ids of edges in no perfect matching)
    """
    covered = covered_edges(g)
    uncovered = tuple(e for e in range(g.m) if e not in covered)
    if not covered and g.n > 0:
        return False, uncovered
    return (g.is_connected and not uncovered), uncovered


def matching_covered_core(g: MultiGraph) -> Subgraph:
    """
    Spanning subgraph on the admissible edges.

    Raises:
        NoPerfectMatchingError: When g has no perfect matching
    """
    covered = covered_edges(g)
    if g.n > 0 and not covered:
        raise NoPerfectMatchingError("graph has no perfect matching", {"n": g.n, "m": g.m})
    core = g.edge_subgraph(covered)
    if core.graph.m != g.m:
        logger.debug(f"Core drops {g.m - core.graph.m} inadmissible edges")
    return core

"""
Tight cut service.
Barriers, 2-separations, tight cut decomposition and the dimension formulas.
"""
import logging
import random
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import Literal, Union

import networkx as nx

from app.core.exceptions import InvariantViolation, NotMatchingCoveredError, PreconditionError
from app.graph import (
    ContractionResult,
    Cut,
    MultiGraph,
    contract,
    has_perfect_matching,
    is_matching_covered,
    is_tight_cut,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Barrier:
    """A vertex set B with the odd components of G - B."""

    vertices: frozenset[int]
    odd_components: tuple[frozenset[int], ...]

    @property
    def size(self) -> int:
        return len(self.vertices)


@dataclass(frozen=True)
class TwoSeparation:
    pair: tuple[int, int]
    cuts: tuple[Cut, Cut]
    even_components: tuple[frozenset[int], ...]


@dataclass(frozen=True)
class DecompositionLeaf:
    graph: MultiGraph
    kind: Literal["brick", "brace"]
    edge_map: tuple[int, ...]


@dataclass(frozen=True)
class DecompositionNode:
    graph: MultiGraph
    cut: Cut
    contractions: tuple[ContractionResult, ContractionResult]
    children: tuple["DecompositionTree", "DecompositionTree"]
    edge_map: tuple[int, ...]


DecompositionTree = Union[DecompositionLeaf, DecompositionNode]


def _components_without(g: MultiGraph, removed: set[int]) -> list[frozenset[int]]:
    graph = g.simple_graph()
    graph.remove_nodes_from(removed)
    parts = [frozenset(c) for c in nx.connected_components(graph)]
    return sorted(parts, key=min)


# ─────────────────────────────────────────────────────────────────
# Barriers and 2-separations
# ─────────────────────────────────────────────────────────────────

def maximal_barriers(g: MultiGraph) -> list[frozenset[int]]:
    """
    Classes of x ~ y iff G - x - y has no perfect matching.

    On a matching covered graph the classes of size >= 2 are exactly the
    maximal nontrivial barriers.
    """
    parent = list(range(g.n))

    def find(v: int) -> int:
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for x, y in combinations(range(g.n), 2):
        if find(x) == find(y):
            continue
        if not has_perfect_matching(g, removed=(x, y)):
            parent[find(y)] = find(x)

    classes: dict[int, set[int]] = {}
    for v in range(g.n):
        classes.setdefault(find(v), set()).add(v)
    return sorted((frozenset(c) for c in classes.values()), key=min)


def barrier_of(g: MultiGraph, vertices: frozenset[int]) -> Barrier:
    odd = tuple(c for c in _components_without(g, set(vertices)) if len(c) % 2 == 1)
    return Barrier(vertices=vertices, odd_components=odd)


def maximal_barrier_containing(g: MultiGraph, u: int) -> Barrier:
    """
    The maximal barrier through u, read off the Gallai-Edmonds structure of G - u.

    D collects the vertices y with G - u - y perfectly matchable; the barrier is
    {u} together with the neighbours of D outside D. Even components left over
    are absorbed one vertex at a time. Needs only that g has a perfect matching.
    """
    if not has_perfect_matching(g):
        raise PreconditionError("maximal barrier needs a graph with a perfect matching", {"vertex": u})

    deficient = {y for y in range(g.n) if y != u and has_perfect_matching(g, removed=(u, y))}
    vertices = {u}
    for y in deficient:
        for eid in g.incidence[y]:
            w = g.other_end(eid, y)
            if w != u and w not in deficient:
                vertices.add(w)

    while True:
        even = [k for k in _components_without(g, vertices) if len(k) % 2 == 0]
        if not even:
            break
        vertices.add(min(even[0]))

    barrier = barrier_of(g, frozenset(vertices))
    if len(barrier.odd_components) != barrier.size:
        raise InvariantViolation(
            "Gallai-Edmonds barrier has the wrong number of odd components",
            {"vertex": u, "barrier": sorted(barrier.vertices)},
        )
    return barrier


def two_separations(g: MultiGraph) -> list[TwoSeparation]:
    """Vertex pairs whose removal leaves at least two even components, with their cuts."""
    found: list[TwoSeparation] = []
    for u, v in combinations(range(g.n), 2):
        parts = _components_without(g, {u, v})
        even = tuple(c for c in parts if len(c) % 2 == 0)
        if len(even) < 2:
            continue
        first = even[0]
        found.append(
            TwoSeparation(
                pair=(u, v),
                cuts=(Cut.of(g, first | {u}), Cut.of(g, first | {v})),
                even_components=even,
            )
        )
    return found


# ─────────────────────────────────────────────────────────────────
# Tight cuts
# ─────────────────────────────────────────────────────────────────

def _barrier_candidates(g: MultiGraph) -> list[Cut]:
    shores: list[frozenset[int]] = []
    for cls in maximal_barriers(g):
        if len(cls) < 2:
            continue
        shores.extend(k for k in barrier_of(g, cls).odd_components if len(k) >= 3)
    shores.sort(key=lambda k: (-len(k), min(k)))
    return [Cut.of(g, k) for k in shores]


def find_nontrivial_tight_cut(g: MultiGraph, rng: random.Random | None = None) -> Cut | None:
    """
    A verified nontrivial tight cut, or None for bricks and braces.

    Barrier cuts come first, largest component first, then 2-separation cuts.
    `rng` shuffles the candidates within each group.
    """
    if g.n < 4:
        return None

    barrier_cuts = _barrier_candidates(g)
    separation_cuts = [c for sep in two_separations(g) for c in sep.cuts]
    if rng is not None:
        rng.shuffle(barrier_cuts)
        rng.shuffle(separation_cuts)

    for cut in barrier_cuts + separation_cuts:
        if cut.trivial:
            continue
        if is_tight_cut(g, cut):
            return cut
        logger.debug(f"Candidate cut {sorted(cut.shore)} is not tight")
    return None


def tight_cut_decomposition(g: MultiGraph, rng: random.Random | None = None) -> DecompositionTree:
    """
    Contract both shores of nontrivial tight cuts until only bricks and braces remain.

    Without `rng` the candidate order is fixed and the tree is cached per graph.

    Raises:
        NotMatchingCoveredError: When g is not matching covered
    """
    if rng is None:
        return _canonical_decomposition(g)
    return _build_decomposition(g, rng)


@lru_cache(maxsize=4096)
def _canonical_decomposition(g: MultiGraph) -> DecompositionTree:
    return _build_decomposition(g, None)


def _build_decomposition(g: MultiGraph, rng: random.Random | None) -> DecompositionTree:
    covered, uncovered = is_matching_covered(g)
    if not covered:
        raise NotMatchingCoveredError("tight cut decomposition needs a matching covered graph", uncovered)

    tree = _decompose(g, tuple(range(g.m)), rng)
    leaves = list(iter_leaves(tree))
    if len(leaves) > max(g.n, 1):
        raise InvariantViolation("more leaves than vertices", {"leaves": len(leaves), "n": g.n})
    logger.debug(
        f"Decomposed graph (n={g.n}, m={g.m}) into "
        f"{sum(leaf.kind == 'brick' for leaf in leaves)} bricks and "
        f"{sum(leaf.kind == 'brace' for leaf in leaves)} braces"
    )
    return tree


def _decompose(g: MultiGraph, edge_map: tuple[int, ...], rng: random.Random | None) -> DecompositionTree:
    cut = find_nontrivial_tight_cut(g, rng)
    if cut is None:
        return DecompositionLeaf(graph=g, kind="brace" if g.is_bipartite else "brick", edge_map=edge_map)

    parts = (contract(g, cut.shore), contract(g, cut.complement))
    children = tuple(
        _decompose(part.graph, tuple(edge_map[e] for e in part.edge_map), rng) for part in parts
    )
    return DecompositionNode(graph=g, cut=cut, contractions=parts, children=children, edge_map=edge_map)


def iter_leaves(tree: DecompositionTree):
    """Leaves left to right (left child keeps vertex 0)."""
    if isinstance(tree, DecompositionLeaf):
        yield tree
        return
    for child in tree.children:
        yield from iter_leaves(child)


# ─────────────────────────────────────────────────────────────────
# Dimension formulas
# ─────────────────────────────────────────────────────────────────

def brick_count(g: MultiGraph, rng: random.Random | None = None) -> int:
    """Number of bricks, summed over connected components."""
    total = 0
    for part in g.components():
        tree = tight_cut_decomposition(part.graph, rng)
        total += sum(1 for leaf in iter_leaves(tree) if leaf.kind == "brick")
    return total


def polytope_dimension(g: MultiGraph) -> int:
    """dim PM(G) = |E| - |V| + 1 - b per component, summed."""
    return sum(
        part.graph.m - part.graph.n + 1 - brick_count(part.graph) for part in g.components()
    )


def lattice_dimension(g: MultiGraph) -> int:
    return polytope_dimension(g) + 1


def is_petersen_graph(g: MultiGraph) -> bool:
    """Underlying simple graph is the Petersen graph."""
    if g.n != 10:
        return False
    simple = g.simple_graph()
    if simple.number_of_edges() != 15 or any(d != 3 for _, d in simple.degree()):
        return False
    return nx.is_isomorphic(simple, nx.petersen_graph())


def brick_leaves(g: MultiGraph) -> list[MultiGraph]:
    """Bricks of a connected matching covered graph, left to right."""
    return [leaf.graph for leaf in iter_leaves(tight_cut_decomposition(g)) if leaf.kind == "brick"]


def is_near_brick(g: MultiGraph) -> bool:
    return is_matching_covered(g)[0] and brick_count(g) == 1


def is_brick(g: MultiGraph) -> bool:
    return not g.is_bipartite and find_nontrivial_tight_cut(g) is None

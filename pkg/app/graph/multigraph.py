"""
Multigraph value types.
Edges keep their input position as identity; every vector over E is indexed by it.
"""
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable

import networkx as nx

from app.core.exceptions import PreconditionError


@dataclass(frozen=True)
class MultiGraph:
    """Undirected multigraph on vertices 0..n-1 with stable edge ids."""

    n: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if self.n < 0:
            raise PreconditionError("vertex count must be non-negative")
        object.__setattr__(self, "edges", tuple((int(a), int(b)) for a, b in self.edges))
        for eid, (a, b) in enumerate(self.edges):
            if a == b:
                raise PreconditionError(f"edge {eid} is a self-loop", {"edge": eid})
            if not (0 <= a < self.n and 0 <= b < self.n):
                raise PreconditionError(f"edge {eid} has an endpoint out of range", {"edge": eid})

    @classmethod
    def from_networkx(cls, graph: nx.Graph) -> "MultiGraph":
        """Nodes relabelled 0..n-1 in sorted order; edges sorted by endpoint pair."""
        index = {v: i for i, v in enumerate(sorted(graph.nodes()))}
        pairs = sorted(
            (min(index[a], index[b]), max(index[a], index[b])) for a, b, *_ in graph.edges()
        )
        return cls(len(index), tuple(pairs))

    @property
    def m(self) -> int:
        return len(self.edges)

    @property
    def vertices(self) -> range:
        return range(self.n)

    def endpoints(self, eid: int) -> tuple[int, int]:
        return self.edges[eid]

    def other_end(self, eid: int, v: int) -> int:
        a, b = self.edges[eid]
        return b if a == v else a

    @cached_property
    def incidence(self) -> tuple[tuple[int, ...], ...]:
        """Edge ids incident to each vertex, ascending."""
        inc: list[list[int]] = [[] for _ in range(self.n)]
        for eid, (a, b) in enumerate(self.edges):
            inc[a].append(eid)
            inc[b].append(eid)
        return tuple(tuple(ids) for ids in inc)

    def degree(self, v: int) -> int:
        return len(self.incidence[v])

    def to_networkx(self, edge_ids: Iterable[int] | None = None) -> nx.MultiGraph:
        """Export as a networkx multigraph keyed by edge id."""
        graph = nx.MultiGraph()
        graph.add_nodes_from(range(self.n))
        ids = range(self.m) if edge_ids is None else sorted(edge_ids)
        for eid in ids:
            a, b = self.edges[eid]
            graph.add_edge(a, b, key=eid)
        return graph

    def simple_graph(self) -> nx.Graph:
        """Underlying simple graph (parallel classes merged)."""
        graph = nx.Graph()
        graph.add_nodes_from(range(self.n))
        graph.add_edges_from(self.edges)
        return graph

    @cached_property
    def is_connected(self) -> bool:
        if self.n == 0:
            return False
        return nx.is_connected(self.simple_graph())

    @cached_property
    def is_bipartite(self) -> bool:
        return nx.is_bipartite(self.simple_graph())

    def parallel_classes(self) -> dict[tuple[int, int], list[int]]:
        """Edge ids grouped by unordered endpoint pair, in edge-id order."""
        classes: dict[tuple[int, int], list[int]] = {}
        for eid, (a, b) in enumerate(self.edges):
            classes.setdefault((min(a, b), max(a, b)), []).append(eid)
        return classes

    def crossing(self, shore: Iterable[int]) -> frozenset[int]:
        """δ(shore): edges with exactly one endpoint in the shore."""
        inside = set(shore)
        return frozenset(
            eid for eid, (a, b) in enumerate(self.edges) if (a in inside) != (b in inside)
        )

    def edge_subgraph(self, edge_ids: Iterable[int]) -> "Subgraph":
        """Spanning subgraph on the given edges; vertex set unchanged."""
        kept = tuple(sorted(set(edge_ids)))
        return Subgraph(
            graph=MultiGraph(self.n, tuple(self.edges[e] for e in kept)),
            edge_map=kept,
            vertex_map=tuple(range(self.n)),
        )

    def induced(self, vertices: Iterable[int]) -> "Subgraph":
        """Induced subgraph, vertices relabelled 0..k-1 in ascending order."""
        keep = sorted(set(vertices))
        index = {v: i for i, v in enumerate(keep)}
        kept = tuple(
            eid for eid, (a, b) in enumerate(self.edges) if a in index and b in index
        )
        return Subgraph(
            graph=MultiGraph(
                len(keep), tuple((index[self.edges[e][0]], index[self.edges[e][1]]) for e in kept)
            ),
            edge_map=kept,
            vertex_map=tuple(keep),
        )

    def components(self) -> list["Subgraph"]:
        """Connected components as induced subgraphs, ordered by smallest vertex."""
        parts = sorted(
            (sorted(c) for c in nx.connected_components(self.simple_graph())),
            key=lambda c: c[0],
        )
        return [self.induced(part) for part in parts]


@dataclass(frozen=True)
class Subgraph:
    """A derived graph together with maps back to its parent's ids."""

    graph: MultiGraph
    edge_map: tuple[int, ...]
    vertex_map: tuple[int, ...]

    def lift_edges(self, edge_ids: Iterable[int]) -> frozenset[int]:
        return frozenset(self.edge_map[e] for e in edge_ids)

    def lift_vertices(self, vertices: Iterable[int]) -> frozenset[int]:
        return frozenset(self.vertex_map[v] for v in vertices)


@dataclass(frozen=True, order=True)
class Matching:
    """A matching as a sorted tuple of edge ids."""

    edge_ids: tuple[int, ...] = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "edge_ids", tuple(sorted(set(self.edge_ids))))

    def __contains__(self, eid: int) -> bool:
        return eid in self.edge_ids

    def __iter__(self):
        return iter(self.edge_ids)

    def __len__(self) -> int:
        return len(self.edge_ids)

    def incidence_vector(self, m: int) -> tuple[int, ...]:
        vector = [0] * m
        for eid in self.edge_ids:
            vector[eid] = 1
        return tuple(vector)

    def crossings(self, cut_edges: Iterable[int]) -> int:
        return len(set(self.edge_ids).intersection(cut_edges))

    def is_matching_of(self, g: MultiGraph) -> bool:
        seen: set[int] = set()
        for eid in self.edge_ids:
            if not 0 <= eid < g.m:
                return False
            a, b = g.edges[eid]
            if a in seen or b in seen:
                return False
            seen.update((a, b))
        return True

    def is_perfect_matching_of(self, g: MultiGraph) -> bool:
        return self.is_matching_of(g) and 2 * len(self.edge_ids) == g.n

    def lift(self, edge_map: tuple[int, ...]) -> "Matching":
        return Matching(tuple(edge_map[e] for e in self.edge_ids))


@dataclass(frozen=True)
class Cut:
    """δ(U) stored with its shore on the side not containing vertex 0."""

    n: int
    shore: frozenset[int]
    edge_ids: frozenset[int]

    @classmethod
    def of(cls, g: MultiGraph, shore: Iterable[int]) -> "Cut":
        side = frozenset(shore)
        if not side or len(side) >= g.n or not side <= frozenset(range(g.n)):
            raise PreconditionError("cut shore must be a proper non-empty vertex subset")
        if 0 in side:
            side = frozenset(range(g.n)) - side
        return cls(n=g.n, shore=side, edge_ids=g.crossing(side))

    @property
    def complement(self) -> frozenset[int]:
        return frozenset(range(self.n)) - self.shore

    @property
    def odd(self) -> bool:
        return len(self.shore) % 2 == 1 and (self.n - len(self.shore)) % 2 == 1

    @property
    def trivial(self) -> bool:
        return len(self.shore) == 1 or len(self.shore) == self.n - 1

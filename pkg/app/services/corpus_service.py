"""
Graph corpus service.
Named test graphs, exhaustive small matching covered graphs and seeded random ones.
"""
import logging
import random
from typing import Iterator

import networkx as nx

from app.core.config import get_settings
from app.graph import MultiGraph, is_matching_covered

logger = logging.getLogger(__name__)


def petersen_with_parallel_spoke(copies: int = 1) -> MultiGraph:
    base = MultiGraph.from_networkx(nx.petersen_graph())
    return MultiGraph(base.n, base.edges + ((0, 5),) * copies)


def named_graphs() -> dict[str, MultiGraph]:
    """The fixed family used throughout the checks."""
    return {
        "C4": MultiGraph.from_networkx(nx.cycle_graph(4)),
        "C6": MultiGraph.from_networkx(nx.cycle_graph(6)),
        "K4": MultiGraph.from_networkx(nx.complete_graph(4)),
        "K33": MultiGraph.from_networkx(nx.complete_bipartite_graph(3, 3)),
        "prism": MultiGraph.from_networkx(nx.circular_ladder_graph(3)),
        "CL5": MultiGraph.from_networkx(nx.circular_ladder_graph(5)),
        "petersen": MultiGraph.from_networkx(nx.petersen_graph()),
        "petersen+parallel": petersen_with_parallel_spoke(),
    }


# ─────────────────────────────────────────────────────────────────
# Exhaustive generation
# ─────────────────────────────────────────────────────────────────

def _is_candidate(graph: nx.Graph) -> bool:
    # matching covered graphs on 4 or more vertices are 2-connected
    if graph.number_of_nodes() == 2:
        return graph.number_of_edges() == 1
    return nx.is_biconnected(graph)


def _dedup(graphs: Iterator[nx.Graph]) -> list[nx.Graph]:
    buckets: dict[str, list[nx.Graph]] = {}
    unique: list[nx.Graph] = []
    for graph in graphs:
        key = nx.weisfeiler_lehman_graph_hash(graph, iterations=3)
        bucket = buckets.setdefault(key, [])
        if any(nx.is_isomorphic(graph, other) for other in bucket):
            continue
        bucket.append(graph)
        unique.append(graph)
    return unique


def _eight_vertex_graphs(seven: list[nx.Graph]) -> Iterator[nx.Graph]:
    """Connected 7-vertex graphs plus one new vertex on every neighbourhood of size >= 2."""
    for base in seven:
        nodes = sorted(base.nodes())
        for mask in range(1, 1 << len(nodes)):
            if bin(mask).count("1") < 2:
                continue
            graph = base.copy()
            graph.add_edges_from((7, nodes[i]) for i in range(len(nodes)) if mask >> i & 1)
            if min(d for _, d in graph.degree()) >= 2 and _is_candidate(graph):
                yield graph


def exhaustive_graphs(max_n: int = 8) -> list[MultiGraph]:
    """
    All simple matching covered graphs with at most `max_n` vertices, up to isomorphism.

    Graphs up to 7 vertices come from the networkx atlas; 8-vertex graphs are
    grown from connected 7-vertex graphs and deduplicated.
    """
    atlas = [g for g in nx.graph_atlas_g() if g.number_of_nodes() > 0 and nx.is_connected(g)]
    found: list[MultiGraph] = []
    for graph in atlas:
        n = graph.number_of_nodes()
        if n % 2 or n > max_n or not _is_candidate(graph):
            continue
        candidate = MultiGraph.from_networkx(graph)
        if is_matching_covered(candidate)[0]:
            found.append(candidate)

    if max_n >= 8:
        seven = [g for g in atlas if g.number_of_nodes() == 7]
        for graph in _dedup(_eight_vertex_graphs(seven)):
            candidate = MultiGraph.from_networkx(graph)
            if is_matching_covered(candidate)[0]:
                found.append(candidate)

    logger.info(f"Exhaustive corpus: {len(found)} matching covered graphs with n <= {max_n}")
    return found


# ─────────────────────────────────────────────────────────────────
# Random generation
# ─────────────────────────────────────────────────────────────────

def _random_bipartite_regular(n: int, degree: int, rng: random.Random) -> MultiGraph:
    half = n // 2
    edges = []
    for _ in range(degree):
        right = list(range(half, n))
        rng.shuffle(right)
        edges.extend((i, right[i]) for i in range(half))
    return MultiGraph(n, tuple(sorted(edges)))


def _random_cubic(n: int, rng: random.Random, chords: int) -> MultiGraph:
    graph = nx.random_regular_graph(3, n, seed=rng.randrange(2**31))
    g = MultiGraph.from_networkx(graph)
    extra = []
    for _ in range(chords):
        a, b = rng.sample(range(n), 2)
        extra.append((min(a, b), max(a, b)))
    return MultiGraph(n, g.edges + tuple(extra))


def random_graphs(count: int | None = None, max_n: int | None = None, seed: int | None = None) -> list[MultiGraph]:
    """
    Seeded random matching covered graphs: cubic, near-cubic and bipartite regular.

    Draws that are not matching covered are skipped.
    """
    settings = get_settings()
    count = settings.corpus_random_count if count is None else count
    max_n = settings.corpus_random_max_n if max_n is None else max_n
    seed = settings.corpus_seed if seed is None else seed

    rng = random.Random(seed)
    sizes = list(range(4, max_n + 1, 2))
    found: list[MultiGraph] = []
    attempts = 0
    while len(found) < count and attempts < 50 * count:
        attempts += 1
        n = rng.choice(sizes)
        kind = attempts % 3
        if kind == 0:
            g = _random_bipartite_regular(n, 3, rng)
        else:
            g = _random_cubic(n, rng, chords=kind - 1)
        if is_matching_covered(g)[0]:
            found.append(g)

    logger.info(f"Random corpus: {len(found)} graphs after {attempts} draws")
    return found

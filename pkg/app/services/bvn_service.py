"""
Facet descent service.
Builds a basis of perfect matchings by repeatedly dropping facet edges, and
extracts half-integral certificates when the bipartite relaxation is not integral.
"""
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Literal, Union

import networkx as nx

from app.core.config import get_settings
from app.core.exceptions import (
    InvariantViolation,
    NoPerfectMatchingError,
    NotMatchingCoveredError,
    PreconditionError,
)
from app.graph import (
    Matching,
    MultiGraph,
    is_matching_covered,
    matching_covered_core,
    perfect_matching_with,
)
from app.lattice import VertexSolution, degree_program, rational_rank, simplex_solve
from app.services.tight_cut_service import polytope_dimension

logger = logging.getLogger(__name__)

HALF = Fraction(1, 2)


@dataclass(frozen=True)
class FractionalCertificate:
    """Half-integral vertex of the bipartite relaxation, split into cycles and edges."""

    point: tuple[Fraction, ...]
    odd_cycles: tuple[tuple[int, ...], ...]
    integer_edges: tuple[int, ...]

    def cut_value(self, edge_ids) -> Fraction:
        return sum((self.point[e] for e in edge_ids), Fraction(0))


@dataclass(frozen=True)
class BvnBasis:
    """Matchings y(e_0), ..., y(e_T) and the final matching, in collection order."""

    matchings: tuple[Matching, ...]
    step_edges: tuple[int, ...]


@dataclass(frozen=True)
class Stuck:
    active_edges: frozenset[int]
    collected: tuple[tuple[int, Matching], ...]
    dimension: int


@dataclass(frozen=True)
class StepDecision:
    accepted: bool
    route: Literal["lp", "dimension", "none"] = "none"
    next_active: frozenset[int] = field(default_factory=frozenset)
    next_dimension: int = -1
    certificate: FractionalCertificate | None = None


BvnOutcome = Union[BvnBasis, FractionalCertificate, Stuck]


# ─────────────────────────────────────────────────────────────────
# Certificates
# ─────────────────────────────────────────────────────────────────

def _full_point(g: MultiGraph, solution: VertexSolution, labels: tuple[int, ...]) -> tuple[Fraction, ...]:
    point = [Fraction(0)] * g.m
    for eid, value in zip(labels, solution.point):
        point[eid] = value
    return tuple(point)


def _is_fractional(point) -> bool:
    return any(x.denominator != 1 for x in point)


def _assert_half_integral(point) -> None:
    bad = [i for i, x in enumerate(point) if x not in (0, HALF, 1)]
    if bad:
        raise InvariantViolation(
            "vertex of the bipartite relaxation is not half-integral",
            {"coordinates": {i: str(point[i]) for i in bad}},
        )


def _walk_cycle(g: MultiGraph, component: set[int], half_edges: list[int]) -> tuple[int, ...]:
    """Vertices of a half-weight cycle in walk order from its smallest vertex."""
    incident: dict[int, list[int]] = {v: [] for v in component}
    for eid in half_edges:
        a, b = g.edges[eid]
        if a in component:
            incident[a].append(eid)
            incident[b].append(eid)
    if any(len(ids) != 2 for ids in incident.values()):
        raise InvariantViolation("half-weight support is not a union of cycles", {"vertices": sorted(component)})

    start = min(component)
    order = [start]
    used = {min(incident[start], key=lambda e: (g.other_end(e, start), e))}
    current = g.other_end(next(iter(used)), start)
    while current != start:
        order.append(current)
        nxt = next(e for e in incident[current] if e not in used)
        used.add(nxt)
        current = g.other_end(nxt, current)
    return tuple(order)


def extract_certificate(g: MultiGraph, point) -> FractionalCertificate:
    """
    Split a fractional vertex into weight-1 edges and odd cycles of weight 1/2.

    Raises:
        InvariantViolation: On a coordinate outside {0, 1/2, 1} or a broken support
        PreconditionError: When the point is integral
    """
    values = tuple(Fraction(x) for x in point)
    if len(values) != g.m:
        raise PreconditionError("point must have one coordinate per edge")
    _assert_half_integral(values)
    if not _is_fractional(values):
        raise PreconditionError("point is integral, no certificate to extract")
    for v in range(g.n):
        if sum((values[e] for e in g.incidence[v]), Fraction(0)) != 1:
            raise InvariantViolation("point violates a degree constraint", {"vertex": v})

    half_edges = [e for e in range(g.m) if values[e] == HALF]
    support = nx.Graph()
    support.add_edges_from(g.edges[e] for e in half_edges)
    cycles = []
    for component in sorted(nx.connected_components(support), key=min):
        cycle = _walk_cycle(g, set(component), half_edges)
        if len(cycle) % 2 == 0:
            raise InvariantViolation("half-weight cycle has even length", {"cycle": list(cycle)})
        cycles.append(cycle)

    return FractionalCertificate(
        point=values,
        odd_cycles=tuple(cycles),
        integer_edges=tuple(e for e in range(g.m) if values[e] == 1),
    )


def _relaxation_solve(g: MultiGraph, active, objective: dict[int, int], sense: str) -> tuple[FractionalCertificate | None, VertexSolution]:
    """Optimize over P(G[active]); every optimal vertex must be half-integral."""
    lp = degree_program(g, active, objective, sense)
    solution = simplex_solve(lp)
    if solution.status != "optimal":
        return None, solution
    point = _full_point(g, solution, lp.labels)
    _assert_half_integral(point)
    if _is_fractional(point):
        return extract_certificate(g, point), solution
    return None, solution


def _odd_shores(g: MultiGraph, active: frozenset[int]):
    """Odd vertex sets S with |S| <= n/2, G[S] connected, both sides non-bipartite."""
    graph = nx.Graph()
    graph.add_nodes_from(range(g.n))
    graph.add_edges_from(g.edges[e] for e in active)
    everything = frozenset(range(g.n))
    for size in range(3, g.n // 2 + 1, 2):
        if g.n - size < 3:
            break
        for shore in combinations(range(g.n), size):
            inside = graph.subgraph(shore)
            if not nx.is_connected(inside) or nx.is_bipartite(inside):
                continue
            if size * 2 == g.n and 0 not in shore:
                continue
            if nx.is_bipartite(graph.subgraph(everything.difference(shore))):
                continue
            yield frozenset(shore)


def find_fractional_vertex(g: MultiGraph, active=None) -> FractionalCertificate | None:
    """
    Search the odd sets for a vertex of P(G) violating an odd-set constraint.

    For each candidate shore S, minimize x(δ(S)) over P(G[active]); an optimum
    below 1 is a fractional vertex. Exhausting all shores certifies that the
    relaxation is integral.
    """
    edges = frozenset(range(g.m)) if active is None else frozenset(active)
    probes = 0
    for shore in _odd_shores(g, edges):
        crossing = g.crossing(shore) & edges
        probes += 1
        certificate, solution = _relaxation_solve(g, edges, {e: 1 for e in crossing}, "min")
        if solution.status == "infeasible":
            raise InvariantViolation("relaxation of a matchable graph is infeasible")
        if solution.objective < 1 and certificate is not None:
            logger.debug(f"Odd set {sorted(shore)} is violated after {probes} probes")
            return certificate
    logger.debug(f"No fractional vertex after {probes} odd-set probes")
    return None


# ─────────────────────────────────────────────────────────────────
# Descent steps
# ─────────────────────────────────────────────────────────────────

def lp1_value(g: MultiGraph, active, e: int) -> tuple[Fraction | None, VertexSolution]:
    """
    min x_e with x_e free and every other active edge non-negative.

    Returns None as the value when the program is unbounded.

    Raises:
        InvariantViolation: When the degree system is infeasible
    """
    if e not in active:
        raise PreconditionError("step edge must be active", {"edge": e})
    lp = degree_program(g, active, {e: 1}, "min", free=(e,))
    solution = simplex_solve(lp)
    if solution.status == "infeasible":
        raise InvariantViolation("degree system of the active edges is infeasible", {"edge": e})
    if solution.status == "unbounded":
        return None, solution
    return solution.objective, solution


def _dimension_after(g: MultiGraph, active: frozenset[int], e: int) -> tuple[frozenset[int], int] | None:
    sub = g.edge_subgraph(active - {e})
    try:
        core = matching_covered_core(sub.graph)
    except NoPerfectMatchingError:
        return None
    kept = frozenset(sub.edge_map[i] for i in core.edge_map)
    return kept, polytope_dimension(g.edge_subgraph(kept).graph)


def accept_step_edge(
    g: MultiGraph,
    active: frozenset[int],
    e: int,
    dimension: int,
    trusted: bool,
) -> StepDecision:
    """
    Decide whether {x_e = 0} is a facet of the current face.

    A negative (or unbounded) LP1 value decides at once when the relaxation is
    known to be integral; otherwise the face dimension after dropping e, via
    the matching covered core, has to be exactly one less.
    """
    value, solution = lp1_value(g, active, e)
    if value is not None and value >= 0:
        point = _full_point(g, solution, tuple(sorted(active)))
        if all(x >= 0 for x in point) and _is_fractional(point):
            return StepDecision(accepted=False, certificate=extract_certificate(g, point))

    after = _dimension_after(g, active, e)
    if after is None:
        return StepDecision(accepted=False)
    kept, next_dimension = after

    lp_negative = value is None or value < 0
    if trusted and lp_negative:
        if next_dimension != dimension - 1:
            raise InvariantViolation(
                "LP1 accepted an edge whose face is not a facet",
                {"edge": e, "dimension": dimension, "after": next_dimension},
            )
        return StepDecision(True, "lp", kept, next_dimension)
    if next_dimension == dimension - 1:
        return StepDecision(True, "dimension", kept, next_dimension)
    return StepDecision(accepted=False)


def _fallback_probe(g: MultiGraph, active: frozenset[int]) -> FractionalCertificate | None:
    for e in sorted(active):
        for sense in ("min", "max"):
            certificate, _ = _relaxation_solve(g, active, {e: 1}, sense)
            if certificate is not None:
                return certificate
    return find_fractional_vertex(g, active)


def run_bvn(g: MultiGraph, probe: Literal["eager", "fallback"] | None = None) -> BvnOutcome:
    """
    Collect one perfect matching per facet edge until a single matching is left.

    Args:
        g: A connected matching covered graph
        probe: "eager" searches for a fractional vertex before descending on
            non-bipartite input; "fallback" only when no edge is accepted

    Returns:
        BvnBasis, FractionalCertificate, or Stuck
    """
    covered, uncovered = is_matching_covered(g)
    if not covered:
        raise NotMatchingCoveredError("facet descent needs a connected matching covered graph", uncovered)
    probe = probe or get_settings().bvn_probe

    trusted = g.is_bipartite
    if not trusted and probe == "eager":
        certificate = find_fractional_vertex(g)
        if certificate is not None:
            logger.info(f"Fractional vertex found with {len(certificate.odd_cycles)} odd cycles")
            return certificate
        trusted = True

    target = polytope_dimension(g)
    active = frozenset(range(g.m))
    dimension = target
    collected: list[tuple[int, Matching]] = []

    while dimension > 0:
        decision = None
        for e in sorted(active):
            decision = accept_step_edge(g, active, e, dimension, trusted)
            if decision.certificate is not None:
                return decision.certificate
            if decision.accepted:
                step = perfect_matching_with(g, include=(e,), exclude=set(range(g.m)) - active)
                if step is None:
                    raise InvariantViolation("accepted edge lies in no perfect matching", {"edge": e})
                collected.append((e, step))
                logger.debug(f"Step {len(collected)}: edge {e} accepted via {decision.route}")
                break
        else:
            certificate = _fallback_probe(g, active)
            if certificate is not None:
                return certificate
            logger.warning(f"Facet descent stuck at dimension {dimension} with {len(active)} active edges")
            return Stuck(active_edges=active, collected=tuple(collected), dimension=dimension)

        if decision.next_dimension != dimension - 1:
            raise InvariantViolation(
                "face dimension did not drop by one",
                {"before": dimension, "after": decision.next_dimension},
            )
        active, dimension = decision.next_active, decision.next_dimension

    final = perfect_matching_with(g, exclude=set(range(g.m)) - active)
    if final is None:
        raise InvariantViolation("zero-dimensional face has no perfect matching")
    matchings = tuple(m for _, m in collected) + (final,)

    if len(matchings) != target + 1:
        raise InvariantViolation("descent produced the wrong number of matchings", {"size": len(matchings)})
    if rational_rank([m.incidence_vector(g.m) for m in matchings], g.m) != len(matchings):
        raise InvariantViolation("descent matchings are linearly dependent")
    return BvnBasis(matchings=matchings, step_edges=tuple(e for e, _ in collected))

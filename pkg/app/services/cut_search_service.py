"""
Robust cut search.
Turns a half-integral certificate on a non-BvN brick into a separating,
facet-defining odd cut whose contractions are near-bricks without a Petersen brick.
"""
import logging
from dataclasses import dataclass
from itertools import combinations
from typing import Any

import networkx as nx
from networkx.algorithms.isomorphism import GraphMatcher

from app.core.exceptions import CutSearchError, LatticeException, PreconditionError
from app.graph import (
    ContractionResult,
    Cut,
    Matching,
    MultiGraph,
    contract,
    contractions,
    is_matching_covered,
    is_separating_cut,
    perfect_matching_with,
    phi,
    phi_profile,
)
from app.services.bvn_service import FractionalCertificate
from app.services.tight_cut_service import (
    brick_leaves,
    find_nontrivial_tight_cut,
    is_near_brick,
    is_petersen_graph,
    maximal_barrier_containing,
    two_separations,
)

logger = logging.getLogger(__name__)

# Petersen vertices z, v, x', z', v' in networkx labelling, with x = 0 on the outer cycle
_WHEEL_SIDE = (2, 3, 5, 7, 8)


@dataclass(frozen=True)
class RobustCut:
    cut: Cut
    contractions: tuple[ContractionResult, ContractionResult]
    triple_matching: Matching
    history: tuple[dict[str, Any], ...] = ()


def _record(history: list[dict[str, Any]], stage: str, c: Cut, **extra: Any) -> None:
    entry = {"stage": stage, "shore": sorted(c.shore), **extra}
    history.append(entry)
    logger.debug(f"{stage}: shore {entry['shore']}")


def initial_cut(g: MultiGraph, cert: FractionalCertificate) -> Cut:
    """δ of the first odd cycle of the certificate; its x*-value is zero."""
    if not cert.odd_cycles:
        raise PreconditionError("certificate has no odd cycle")
    c = Cut.of(g, cert.odd_cycles[0])
    if cert.cut_value(c.edge_ids) != 0:
        raise CutSearchError("certificate does not vanish on the cycle cut", [{"shore": sorted(c.shore)}])
    return c


def matching_triple(g: MultiGraph, c: Cut) -> Matching | None:
    """First perfect matching meeting c in exactly three edges, by ascending edge triples."""
    cut_edges = sorted(c.edge_ids)
    for triple in combinations(cut_edges, 3):
        ends = [v for e in triple for v in g.edges[e]]
        if len(set(ends)) != 6:
            continue
        found = perfect_matching_with(g, include=triple, exclude=set(cut_edges) - set(triple))
        if found is not None:
            return found
    return None


def _face_witness(g: MultiGraph, c: Cut, candidate: Cut) -> Matching | None:
    """A perfect matching crossing c three times and `candidate` once."""
    cut_edges = sorted(c.edge_ids)
    weights = [1 if e in candidate.edge_ids else 0 for e in range(g.m)]
    for triple in combinations(cut_edges, 3):
        if len({v for e in triple for v in g.edges[e]}) != 6:
            continue
        found = perfect_matching_with(
            g, include=triple, exclude=set(cut_edges) - set(triple), weights=weights, sense="min"
        )
        if found is not None and found.crossings(candidate.edge_ids) == 1:
            return found
    return None


# ─────────────────────────────────────────────────────────────────
# Separating stage
# ─────────────────────────────────────────────────────────────────

def make_separating(g: MultiGraph, c: Cut, history: list[dict[str, Any]] | None = None) -> Cut:
    """
    Replace c by barrier component cuts until both contractions are matching covered.

    Each replacement keeps phi from growing and strictly lowers the sum of the
    per-edge crossing minima; the loop is capped at |V| rounds.

    Raises:
        CutSearchError: When no nontrivial replacement exists or progress stalls
    """
    history = history if history is not None else []
    if not c.odd or c.trivial:
        raise PreconditionError("make_separating needs a nontrivial odd cut")

    current = c
    current_phi = phi(g, current)
    potential = sum(phi_profile(g, current))
    for _ in range(g.n):
        parts = contractions(g, current)
        failing = [p for p in parts if not is_matching_covered(p.graph)[0]]
        if not failing:
            return current
        part = failing[0]

        try:
            barrier = maximal_barrier_containing(part.graph, part.contracted_vertex)
        except LatticeException as exc:
            raise CutSearchError(f"no barrier through the contracted vertex: {exc.message}", history) from exc

        options = []
        for component in barrier.odd_components:
            shore = part.lift_shore(component, g.n)
            if len(shore) < 3 or g.n - len(shore) < 3:
                continue
            candidate = Cut.of(g, shore)
            options.append(
                (phi(g, candidate), sum(phi_profile(g, candidate)), len(candidate.shore), sorted(candidate.shore), candidate)
            )
        if not options:
            raise CutSearchError("every barrier component cut is trivial", history)

        next_phi, next_potential, _, _, chosen = min(options, key=lambda o: o[:4])
        if next_phi > current_phi or next_potential >= potential:
            raise CutSearchError(
                "barrier replacement made no progress",
                history + [{"phi": [current_phi, next_phi], "potential": [potential, next_potential]}],
            )
        current, current_phi, potential = chosen, next_phi, next_potential
        _record(history, "separate", current, phi=current_phi, potential=potential)

    raise CutSearchError("separating stage exceeded |V| rounds", history)


# ─────────────────────────────────────────────────────────────────
# Facet stage
# ─────────────────────────────────────────────────────────────────

def _facet_candidates(g: MultiGraph, part: ContractionResult) -> list[Cut]:
    """
    Lifted tight cuts of the contraction: 2-separations through the contracted
    vertex, its maximal barrier, then any other nontrivial tight cut.
    """
    u = part.contracted_vertex
    shores: set[frozenset[int]] = set()
    for sep in two_separations(part.graph):
        if u not in sep.pair:
            continue
        for component in sep.even_components:
            shores.add(part.lift_shore(component | {u}, g.n))
    try:
        barrier = maximal_barrier_containing(part.graph, u)
        shores.update(part.lift_shore(k, g.n) for k in barrier.odd_components)
    except LatticeException:
        pass

    cuts = sorted(
        {Cut.of(g, s) for s in shores if 3 <= len(s) <= g.n - 3},
        key=lambda c: (len(c.shore), sorted(c.shore)),
    )
    tight = find_nontrivial_tight_cut(part.graph)
    if tight is not None:
        side = tight.shore if u not in tight.shore else tight.complement
        extra = Cut.of(g, part.lift_shore(side, g.n))
        if extra not in cuts and not extra.trivial:
            cuts.append(extra)
    return cuts


def _offending(g: MultiGraph, c: Cut) -> list[ContractionResult]:
    return [p for p in contractions(g, c) if not is_near_brick(p.graph)]


def make_facet_defining(g: MultiGraph, c: Cut, history: list[dict[str, Any]] | None = None) -> Cut:
    """
    Enlarge the face {x(C) = 1} until both contractions are near-bricks.

    Every candidate is a lifted tight cut of an offending contraction, so its
    face contains the current one. A candidate with a perfect matching meeting
    the current cut three times and the candidate once strictly enlarges the
    face and is preferred. Otherwise an unvisited equivalent cut is taken; it
    shrinks the offending contraction and may not add a second offending side.

    Raises:
        CutSearchError: When no candidate qualifies or the step bound is reached
    """
    history = history if history is not None else []
    current = c if is_separating_cut(g, c) else make_separating(g, c, history)
    visited = {current}
    growth_steps = 0

    for _ in range((g.m + 1) * (g.n + 1)):
        offending = _offending(g, current)
        if not offending:
            return current

        candidates = [f for f in _facet_candidates(g, offending[0]) if f not in visited]
        chosen = next((f for f in candidates if _face_witness(g, current, f) is not None), None)
        grows = chosen is not None
        if chosen is None:
            chosen = next(
                (
                    f
                    for f in candidates
                    if is_separating_cut(g, f) and len(_offending(g, f)) <= len(offending)
                ),
                None,
            )
        if chosen is None:
            raise CutSearchError(
                "no facet candidate enlarges the face or shrinks the offending contraction",
                history + [{"stage": "facet", "shore": sorted(current.shore), "candidates": len(candidates)}],
            )

        _record(history, "facet", chosen, grows=grows)
        current = chosen if is_separating_cut(g, chosen) else make_separating(g, chosen, history)
        if grows:
            growth_steps += 1
            if growth_steps > g.m:
                raise CutSearchError("face grew more than |E| times", history)
            visited = set()
        visited.add(current)

    raise CutSearchError("facet stage exceeded its step bound", history)


# ─────────────────────────────────────────────────────────────────
# Petersen avoidance
# ─────────────────────────────────────────────────────────────────

def _petersen_side(g: MultiGraph, c: Cut) -> int | None:
    for index, part in enumerate(contractions(g, c)):
        if any(is_petersen_graph(brick) for brick in brick_leaves(part.graph)):
            return index
    return None


def _reduce_petersen_side(g: MultiGraph, c: Cut, side: int, history: list[dict[str, Any]]) -> Cut:
    """Move the cut until the Petersen-side contraction has no nontrivial tight cut."""
    current = c
    for _ in range(g.m + 1):
        part = contractions(g, current)[side]
        if is_petersen_graph(part.graph):
            return current
        u = part.contracted_vertex
        tight = find_nontrivial_tight_cut(part.graph)
        if tight is None:
            raise CutSearchError("Petersen-side contraction is a brick but not Petersen", history)
        # keep the side without the contracted vertex
        kept = tight.shore if u not in tight.shore else tight.complement
        shrunk = [v for v in range(part.graph.n) if v not in kept]
        if not any(is_petersen_graph(b) for b in brick_leaves(contract(part.graph, shrunk).graph)):
            raise CutSearchError("Petersen brick is not reachable by a single contraction", history)
        kept_shore = part.lift_shore(kept, g.n)
        current = Cut.of(g, kept_shore)
        side = 1 if current.shore == kept_shore else 0
        _record(history, "petersen-reduce", current)
    raise CutSearchError("Petersen reduction exceeded |E| steps", history)


def shift_off_petersen(g: MultiGraph, c: Cut, history: list[dict[str, Any]] | None = None) -> Cut:
    """
    Move four Petersen vertices across the cut so one side becomes a 5-wheel.

    The contraction whose simple graph is Petersen is labelled with the
    contracted vertex as x on the outer cycle x, y, z, v, w; the vertices
    z, v, x', z', v' then form the new shore.

    Raises:
        PreconditionError: When neither contraction is a Petersen graph
    """
    history = history if history is not None else []
    parts = contractions(g, c)
    part = next((p for p in parts if is_petersen_graph(p.graph)), None)
    if part is None:
        raise PreconditionError("neither contraction is a Petersen graph", {"shore": sorted(c.shore)})

    x = part.contracted_vertex
    matcher = GraphMatcher(nx.petersen_graph(), part.graph.simple_graph())
    labelings = [m for m in matcher.isomorphisms_iter() if m[0] == x]
    labeling = min(labelings, key=lambda m: tuple(m[i] for i in range(10)))

    shifted = Cut.of(g, part.lift_shore({labeling[i] for i in _WHEEL_SIDE}, g.n))
    _record(history, "petersen-shift", shifted)
    return shifted


# ─────────────────────────────────────────────────────────────────
# Pipeline
# ─────────────────────────────────────────────────────────────────

def _is_robust(g: MultiGraph, c: Cut) -> bool:
    if c.trivial or not c.odd or not is_separating_cut(g, c):
        return False
    for part in contractions(g, c):
        if not is_near_brick(part.graph):
            return False
        if any(is_petersen_graph(b) for b in brick_leaves(part.graph)):
            return False
    return True


def _guided_cut(g: MultiGraph, cert: FractionalCertificate, history: list[dict[str, Any]]) -> Cut:
    c = initial_cut(g, cert)
    _record(history, "initial", c, x_star=str(cert.cut_value(c.edge_ids)))
    c = make_separating(g, c, history)
    c = make_facet_defining(g, c, history)
    for _ in range(g.m + 1):
        side = _petersen_side(g, c)
        if side is None:
            return c
        c = _reduce_petersen_side(g, c, side, history)
        c = shift_off_petersen(g, c, history)
        c = make_facet_defining(g, c, history)
    raise CutSearchError("Petersen avoidance did not settle", history)


def robust_cut(g: MultiGraph, cert: FractionalCertificate) -> RobustCut:
    """
    Separating cut with near-brick, Petersen-free contractions and a triple matching.

    Raises:
        PreconditionError: On Petersen input
        CutSearchError: When a stage cannot make progress; details carry the cut history
    """
    if is_petersen_graph(g):
        raise PreconditionError("Petersen graphs take the dedicated base case")

    history: list[dict[str, Any]] = []
    c = _guided_cut(g, cert, history)

    if not _is_robust(g, c):
        raise CutSearchError("final cut is not robust", history)
    triple = matching_triple(g, c)
    if triple is None or triple.crossings(c.edge_ids) != 3:
        raise CutSearchError("separating cut has no perfect matching crossing it three times", history)

    value = cert.cut_value(c.edge_ids)
    if value >= 1:
        logger.warning(f"Certificate value {value} on the final cut is not below 1")
    logger.info(f"Robust cut with shore {sorted(c.shore)} after {len(history)} steps")
    return RobustCut(cut=c, contractions=contractions(g, c), triple_matching=triple, history=tuple(history))

"""
Lattice basis service.
Builds a basis of the perfect matching lattice from perfect matchings: base cases,
composition across cuts, and the top-level driver over the tight cut decomposition.
"""
import logging
from dataclasses import dataclass, field
from typing import Any

from app.core.exceptions import InvariantViolation, PreconditionError, UnsupportedInstanceError
from app.graph import (
    ContractionResult,
    Cut,
    Matching,
    MultiGraph,
    enumerate_perfect_matchings,
    matching_covered_core,
)
from app.lattice import rational_rank
from app.services.bvn_service import BvnBasis, Stuck, run_bvn
from app.services.cut_search_service import robust_cut
from app.services.tight_cut_service import (
    DecompositionLeaf,
    DecompositionTree,
    is_petersen_graph,
    lattice_dimension,
    tight_cut_decomposition,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Basis:
    """Perfect matchings of `graph` whose incidence vectors form a lattice basis."""

    graph: MultiGraph
    matchings: tuple[Matching, ...]
    provenance: dict[str, Any] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.matchings)

    def vectors(self) -> list[tuple[int, ...]]:
        return [m.incidence_vector(self.graph.m) for m in self.matchings]

    def lift(self, graph: MultiGraph, edge_map: tuple[int, ...]) -> "Basis":
        """The same matchings expressed in a parent graph's edge ids."""
        return Basis(graph, tuple(m.lift(edge_map) for m in self.matchings), self.provenance)


def _check_perfect(g: MultiGraph, matchings) -> None:
    for index, m in enumerate(matchings):
        if not m.is_perfect_matching_of(g):
            raise InvariantViolation("basis element is not a perfect matching", {"index": index, "edges": list(m)})


# ─────────────────────────────────────────────────────────────────
# Base cases
# ─────────────────────────────────────────────────────────────────

def petersen_basis(g: MultiGraph) -> Basis:
    """
    The six Petersen matchings, then one swapped matching per extra parallel edge.

    Each extra copy replaces its representative in the lowest-index basis
    matching that uses the representative.
    """
    if not is_petersen_graph(g):
        raise PreconditionError("petersen_basis needs a Petersen graph", {"n": g.n, "m": g.m})

    classes = g.parallel_classes()
    representative = {eid: ids[0] for ids in classes.values() for eid in ids}
    simple = g.edge_subgraph(ids[0] for ids in classes.values())
    matchings = [m.lift(simple.edge_map) for m in enumerate_perfect_matchings(simple.graph, cap=6)]

    extras = sorted(eid for eid in range(g.m) if representative[eid] != eid)
    for extra in extras:
        rep = representative[extra]
        base = next(m for m in matchings if rep in m)
        matchings.append(Matching(tuple(e for e in base if e != rep) + (extra,)))

    provenance: dict[str, Any] = {"step": "petersen"}
    if extras:
        provenance = {"step": "replicate", "extra_edges": extras, "children": [provenance]}
    _check_perfect(g, matchings)
    return Basis(g, tuple(matchings), provenance)


# ─────────────────────────────────────────────────────────────────
# Composition
# ─────────────────────────────────────────────────────────────────

def compose(
    b1: Basis,
    b2: Basis,
    g: MultiGraph,
    c: Cut,
    parts: tuple[ContractionResult, ContractionResult],
) -> Basis:
    """
    Merge bases of the two c-contractions edge by edge across c.

    For every cut edge e with I(e) = {i1, ...} in b1 and J(e) = {j1, ...} in b2,
    emits x_i1 ⊙ y_j for all j in J(e) and x_i ⊙ y_j1 for the remaining i.
    The result has |b1| + |b2| - |c| elements.

    Raises:
        PreconditionError: When an element does not cross c once or some I(e), J(e) is empty
    """
    lifted = []
    for basis, part in zip((b1, b2), parts):
        rows = [m.lift(part.edge_map) for m in basis.matchings]
        for index, m in enumerate(rows):
            if m.crossings(c.edge_ids) != 1:
                raise PreconditionError(
                    "basis element does not cross the cut once",
                    {"index": index, "crossings": m.crossings(c.edge_ids)},
                )
        lifted.append(rows)
    left, right = lifted

    composed: list[Matching] = []
    for e in sorted(c.edge_ids):
        I = [i for i, m in enumerate(left) if e in m]
        J = [j for j, m in enumerate(right) if e in m]
        if not I or not J:
            raise PreconditionError("cut edge is missing from a contraction basis", {"edge": e, "I": I, "J": J})
        composed.extend(Matching(left[I[0]].edge_ids + right[j].edge_ids) for j in J)
        composed.extend(Matching(left[i].edge_ids + right[J[0]].edge_ids) for i in I[1:])

    if len(composed) != len(b1) + len(b2) - len(c.edge_ids):
        raise InvariantViolation("composition has the wrong size", {"size": len(composed)})
    _check_perfect(g, composed)
    return Basis(
        g,
        tuple(composed),
        {"step": "compose", "shore": sorted(c.shore), "children": [b1.provenance, b2.provenance]},
    )


def compose_components(g: MultiGraph, bases: list[Basis]) -> Basis:
    """
    Basis of a disconnected graph from bases of its components, already lifted to g.

    Fixes the first element of every other component, giving sum |B_i| - (k - 1) elements.
    """
    if not bases:
        raise PreconditionError("no component bases to combine")
    matchings = list(bases[0].matchings)
    for basis in bases[1:]:
        head = matchings[0]
        merged = [Matching(head.edge_ids + y.edge_ids) for y in basis.matchings]
        merged += [Matching(x.edge_ids + basis.matchings[0].edge_ids) for x in matchings[1:]]
        matchings = merged
    _check_perfect(g, matchings)
    return Basis(g, tuple(matchings), {"step": "components", "children": [b.provenance for b in bases]})


# ─────────────────────────────────────────────────────────────────
# Drivers
# ─────────────────────────────────────────────────────────────────

def _check_augmentation(g: MultiGraph, c: Cut, matchings: tuple[Matching, ...]) -> None:
    """Size is n/2 everywhere; cut crossings are 1 except exactly one 3."""
    crossings = [m.crossings(c.edge_ids) for m in matchings]
    if any(2 * len(m) != g.n for m in matchings):
        raise InvariantViolation("augmented basis element has the wrong size")
    if any(k not in (1, 3) for k in crossings) or crossings.count(3) != 1:
        raise InvariantViolation("augmented basis has the wrong cut profile", {"crossings": crossings})


def brick_basis(g: MultiGraph) -> Basis:
    """
    Basis of a brick: the Petersen base case, a facet descent, or a robust
    cut split with the two sides solved recursively.

    Raises:
        UnsupportedInstanceError: When the descent is stuck without a certificate
    """
    if is_petersen_graph(g):
        return petersen_basis(g)

    outcome = run_bvn(g)
    if isinstance(outcome, BvnBasis):
        return Basis(g, outcome.matchings, {"step": "bvn-run", "steps": len(outcome.step_edges)})
    if isinstance(outcome, Stuck):
        raise UnsupportedInstanceError(
            "facet descent stuck without a fractional certificate",
            {"dimension": outcome.dimension, "active_edges": sorted(outcome.active_edges)},
        )

    rc = robust_cut(g, outcome)
    sides = [lattice_basis(part.graph) for part in rc.contractions]
    composed = compose(sides[0], sides[1], g, rc.cut, rc.contractions)
    matchings = composed.matchings + (rc.triple_matching,)
    _check_augmentation(g, rc.cut, matchings)

    expected = lattice_dimension(g)
    if len(matchings) != expected:
        raise InvariantViolation("brick basis has the wrong size", {"size": len(matchings), "expected": expected})
    return Basis(
        g,
        matchings,
        {"step": "triple-augment", "shore": sorted(rc.cut.shore), "children": [composed.provenance]},
    )


def _tree_basis(tree: DecompositionTree) -> Basis:
    if isinstance(tree, DecompositionLeaf):
        if tree.kind == "brick":
            return brick_basis(tree.graph)
        outcome = run_bvn(tree.graph)
        if not isinstance(outcome, BvnBasis):
            raise InvariantViolation("facet descent failed on a brace", {"n": tree.graph.n, "m": tree.graph.m})
        return Basis(tree.graph, outcome.matchings, {"step": "bvn-run", "steps": len(outcome.step_edges)})

    left, right = (_tree_basis(child) for child in tree.children)
    return compose(left, right, tree.graph, tree.cut, tree.contractions)


def lattice_basis(g: MultiGraph) -> Basis:
    """
    Lattice basis of perfect matchings for any graph with a perfect matching.

    Inadmissible edges are dropped first; each component is decomposed along
    tight cuts, bricks and braces are solved, and the bases are folded back up.

    Raises:
        NoPerfectMatchingError: When g has no perfect matching
    """
    if g.n == 0:
        raise PreconditionError("graph has no vertices")
    core = matching_covered_core(g)
    bases = []
    for part in core.graph.components():
        basis = _tree_basis(tight_cut_decomposition(part.graph))
        bases.append(basis.lift(core.graph, part.edge_map))
    basis = bases[0] if len(bases) == 1 else compose_components(core.graph, bases)
    basis = basis.lift(g, core.edge_map)

    removed = sorted(set(range(g.m)) - set(core.edge_map))
    provenance = basis.provenance
    if removed:
        provenance = {"step": "core", "removed_edges": removed, "children": [provenance]}

    expected = lattice_dimension(core.graph)
    if len(basis) != expected:
        raise InvariantViolation("basis size differs from the lattice dimension", {"size": len(basis), "expected": expected})
    if rational_rank(basis.vectors(), g.m) != expected:
        raise InvariantViolation("basis vectors are linearly dependent")
    _check_perfect(g, basis.matchings)
    logger.info(f"Lattice basis with {expected} matchings for n={g.n}, m={g.m}")
    return Basis(g, basis.matchings, provenance)

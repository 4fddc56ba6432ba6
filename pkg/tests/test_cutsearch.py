"""
Tests for the robust cut search on non-BvN bricks.
"""
import pytest

from app.core.exceptions import PreconditionError
from app.graph import (
    Cut,
    MultiGraph,
    contract,
    contractions,
    enumerate_perfect_matchings,
    is_separating_cut,
    phi,
    phi_profile,
)
from app.lattice import rational_rank
from app.services.basis_service import lattice_basis
from app.services.bvn_service import find_fractional_vertex
from app.services.cut_search_service import (
    _petersen_side,
    _reduce_petersen_side,
    initial_cut,
    make_facet_defining,
    make_separating,
    matching_triple,
    robust_cut,
    shift_off_petersen,
)
from app.services.tight_cut_service import is_near_brick, is_petersen_graph
from app.services.verify_service import check_basis

PRISM_RUNGS = frozenset({2, 4, 5})

# the facet stage needs equivalent-cut moves here: the barrier through the
# contracted vertex has a single nontrivial component with the same face
EQUIVALENT_MOVE_BRICK = MultiGraph(
    12,
    (
        (0, 2), (0, 7), (0, 8), (1, 3), (1, 8), (1, 10), (2, 6), (2, 11), (3, 7), (3, 10),
        (4, 6), (4, 9), (4, 10), (5, 7), (5, 9), (5, 11), (6, 8), (9, 11), (4, 8), (1, 6),
    ),
)

# cubic; the separating stage has to replace a barrier component cut here
SEPARATE_STAGE_BRICK = MultiGraph(
    10,
    (
        (0, 3), (0, 4), (0, 5), (1, 2), (1, 4), (1, 6), (2, 3), (2, 9),
        (3, 9), (4, 7), (5, 6), (5, 8), (6, 7), (7, 8), (8, 9),
    ),
)

FACET_STAGE_BRICK = MultiGraph(
    10,
    (
        (0, 2), (0, 4), (0, 5), (1, 7), (1, 8), (1, 9), (2, 4), (2, 6),
        (3, 5), (3, 6), (3, 9), (4, 8), (5, 6), (7, 8), (7, 9), (1, 2),
    ),
)

ROBUST_STAGES = {"initial", "separate", "facet", "petersen-reduce", "petersen-shift"}


@pytest.fixture
def petersen_with_triangle():
    """Petersen with vertex 0 blown up into the triangle {0, 10, 11}."""
    edges = (
        (0, 1), (1, 2), (2, 3), (3, 4),
        (10, 4), (11, 5),
        (1, 6), (2, 7), (3, 8), (4, 9),
        (5, 7), (5, 8), (6, 8), (6, 9), (7, 9),
        (0, 10), (10, 11), (0, 11),
    )
    return MultiGraph(12, edges)


@pytest.fixture
def petersen_behind_triangle():
    """
    A Petersen graph whose vertex x sits two tight cuts deep.

    Vertices 1-9 are the Petersen graph minus x. Its three edges to x end at
    10, 11 and 12, which also meet vertex 0 and the triangle 13, 14, 15.
    """
    edges = (
        (1, 2), (2, 3), (3, 4), (1, 6), (2, 7), (3, 8), (4, 9),
        (5, 7), (7, 9), (9, 6), (6, 8), (8, 5),
        (1, 10), (4, 11), (5, 12), (0, 10), (0, 11), (0, 12),
        (13, 10), (14, 11), (15, 12), (13, 14), (14, 15), (13, 15),
    )
    return MultiGraph(16, edges)


def _after(history, stage):
    """Pairs (previous entry, entry) for each entry of the given stage."""
    return [(prev, entry) for prev, entry in zip(history, history[1:]) if entry["stage"] == stage]


def _face_rank(g, shore, matchings):
    c = Cut.of(g, shore)
    return rational_rank([m.incidence_vector(g.m) for m in matchings if m.crossings(c.edge_ids) == 1], g.m)


def _assert_robust(g, rc):
    assert is_separating_cut(g, rc.cut)
    assert rc.triple_matching.crossings(rc.cut.edge_ids) == 3
    for part in rc.contractions:
        assert is_near_brick(part.graph)
        assert not is_petersen_graph(part.graph)


class TestCutStages:
    def test_initial_cut_is_cycle_cut(self, prism):
        cert = find_fractional_vertex(prism)
        c = initial_cut(prism, cert)
        assert c.shore == frozenset({3, 4, 5})
        assert cert.cut_value(c.edge_ids) == 0

    def test_matching_triple_on_rungs(self, prism):
        triple = matching_triple(prism, Cut.of(prism, {3, 4, 5}))
        assert triple.edge_ids == (2, 4, 5)

    def test_matching_triple_absent_on_tight_cut(self, c6):
        assert matching_triple(c6, Cut.of(c6, {1, 2, 3})) is None

    def test_separating_cut_is_kept(self, prism):
        c = Cut.of(prism, {3, 4, 5})
        assert make_separating(prism, c) == c

    def test_facet_stage_keeps_near_brick_sides(self, prism):
        c = Cut.of(prism, {3, 4, 5})
        assert make_facet_defining(prism, c) == c

    def test_make_separating_needs_nontrivial_cut(self, prism):
        with pytest.raises(PreconditionError):
            make_separating(prism, Cut.of(prism, {4}))


class TestPetersenShift:
    """Moving four Petersen vertices across the cut leaves a 5-wheel."""

    def test_triangle_side_contracts_to_petersen(self, petersen_with_triangle):
        g = petersen_with_triangle
        c = Cut.of(g, {0, 10, 11})
        assert any(is_petersen_graph(part.graph) for part in contractions(g, c))

    def test_shift_gives_wheel(self, petersen_with_triangle):
        g = petersen_with_triangle
        shifted = shift_off_petersen(g, Cut.of(g, {0, 10, 11}))
        assert shifted.shore == frozenset({2, 3, 5, 7, 8})
        wheel = contract(g, shifted.complement).graph
        assert wheel.n == 6
        assert sorted(wheel.degree(v) for v in range(6)) == [3, 3, 3, 3, 3, 5]

    def test_shift_needs_petersen_side(self, prism):
        with pytest.raises(PreconditionError):
            shift_off_petersen(prism, Cut.of(prism, {3, 4, 5}))


class TestRobustCut:
    def test_prism(self, prism):
        rc = robust_cut(prism, find_fractional_vertex(prism))
        assert rc.cut.edge_ids == PRISM_RUNGS
        assert rc.triple_matching.edge_ids == (2, 4, 5)
        assert is_separating_cut(prism, rc.cut)
        assert all(is_near_brick(part.graph) for part in rc.contractions)
        assert rc.history[0]["stage"] == "initial"

    def test_cl5(self, named):
        g = named["CL5"]
        cert = find_fractional_vertex(g)
        assert cert is not None
        rc = robust_cut(g, cert)
        assert rc.triple_matching.crossings(rc.cut.edge_ids) == 3
        for part in rc.contractions:
            assert is_near_brick(part.graph)
            assert not is_petersen_graph(part.graph)

    def test_petersen_is_refused(self, petersen):
        with pytest.raises(PreconditionError):
            robust_cut(petersen, find_fractional_vertex(petersen))

    def test_wheel_side_after_shift(self, petersen_with_triangle):
        """The triangle cut contracts to Petersen; the robust cut leaves a 5-wheel and a full basis."""
        g = petersen_with_triangle
        rc = robust_cut(g, find_fractional_vertex(g))
        _assert_robust(g, rc)
        assert "petersen-shift" in [h["stage"] for h in rc.history]
        wheels = [
            part.graph
            for part in rc.contractions
            if sorted(part.graph.degree(v) for v in part.graph.vertices) == [3, 3, 3, 3, 3, 5]
        ]
        assert len(wheels) == 1

        basis = lattice_basis(g)
        assert len(basis) == 7
        assert check_basis(g, basis.matchings).passed is True

    def test_equivalent_cut_moves(self):
        """Facet candidates that only shrink the offending side still lead to a robust cut."""
        g = EQUIVALENT_MOVE_BRICK
        cert = find_fractional_vertex(g)
        assert cert is not None
        rc = robust_cut(g, cert)
        _assert_robust(g, rc)
        assert {h["stage"] for h in rc.history} <= ROBUST_STAGES

        basis = lattice_basis(g)
        assert check_basis(g, basis.matchings).passed is True


class TestStageProgress:
    """Recorded steps measured against the cut before them."""

    def test_separating_steps_lower_phi_and_potential(self):
        g = SEPARATE_STAGE_BRICK
        rc = robust_cut(g, find_fractional_vertex(g))
        _assert_robust(g, rc)
        steps = _after(list(rc.history), "separate")
        assert steps
        for prev, entry in steps:
            before = Cut.of(g, prev["shore"])
            assert entry["phi"] <= phi(g, before)
            assert entry["potential"] < sum(phi_profile(g, before))

    def test_facet_steps_enlarge_the_face(self):
        g = FACET_STAGE_BRICK
        rc = robust_cut(g, find_fractional_vertex(g))
        _assert_robust(g, rc)
        matchings = enumerate_perfect_matchings(g, cap=10000)
        growing = [(prev, entry) for prev, entry in _after(list(rc.history), "facet") if entry["grows"]]
        assert growing
        for prev, entry in growing:
            assert _face_rank(g, prev["shore"], matchings) < _face_rank(g, entry["shore"], matchings)

    def test_facet_steps_never_shrink_the_face(self):
        g = FACET_STAGE_BRICK
        rc = robust_cut(g, find_fractional_vertex(g))
        matchings = enumerate_perfect_matchings(g, cap=10000)
        for prev, entry in _after(list(rc.history), "facet"):
            assert _face_rank(g, prev["shore"], matchings) <= _face_rank(g, entry["shore"], matchings)


class TestPetersenReduction:
    def test_petersen_side_found(self, petersen_behind_triangle):
        g = petersen_behind_triangle
        assert _petersen_side(g, Cut.of(g, {13, 14, 15})) == 0

    def test_reduces_to_petersen_contraction(self, petersen_behind_triangle):
        """The claw barrier cut is the only nontrivial tight cut; contracting past it leaves Petersen."""
        g = petersen_behind_triangle
        history = []
        c = _reduce_petersen_side(g, Cut.of(g, {13, 14, 15}), 0, history)
        assert c.shore == frozenset(range(1, 10))
        assert [h["stage"] for h in history] == ["petersen-reduce"]
        assert any(is_petersen_graph(part.graph) for part in contractions(g, c))

    def test_petersen_contraction_is_kept(self, petersen_with_triangle):
        g = petersen_with_triangle
        c = Cut.of(g, {0, 10, 11})
        side = _petersen_side(g, c)
        history = []
        assert _reduce_petersen_side(g, c, side, history) == c
        assert history == []

"""
Tests for barriers, tight cut decomposition and the dimension formulas.
"""
import random

import pytest

from app.core.exceptions import NotMatchingCoveredError, PreconditionError
from app.graph import Cut, MultiGraph, is_tight_cut
from app.services.tight_cut_service import (
    DecompositionLeaf,
    DecompositionNode,
    brick_count,
    find_nontrivial_tight_cut,
    is_brick,
    is_near_brick,
    is_petersen_graph,
    iter_leaves,
    lattice_dimension,
    maximal_barrier_containing,
    maximal_barriers,
    polytope_dimension,
    tight_cut_decomposition,
    two_separations,
)
from tests.conftest import LATTICE_DIMS


class TestBarriers:
    def test_bipartite_color_classes(self, k33):
        assert maximal_barriers(k33) == [frozenset({0, 1, 2}), frozenset({3, 4, 5})]

    def test_brick_has_only_trivial_barriers(self, k4):
        assert all(len(cls) == 1 for cls in maximal_barriers(k4))

    def test_barrier_through_vertex_of_c6(self, c6):
        barrier = maximal_barrier_containing(c6, 0)
        assert barrier.vertices == frozenset({0, 2, 4})
        assert barrier.odd_components == (frozenset({1}), frozenset({3}), frozenset({5}))

    def test_barrier_through_vertex_of_k4(self, k4):
        barrier = maximal_barrier_containing(k4, 0)
        assert barrier.vertices == frozenset({0})
        assert barrier.size == len(barrier.odd_components) == 1

    def test_barrier_needs_perfect_matching(self):
        with pytest.raises(PreconditionError):
            maximal_barrier_containing(MultiGraph(4, ((0, 1), (0, 2), (0, 3))), 1)

    def test_two_separations_of_c6(self, c6):
        assert [sep.pair for sep in two_separations(c6)] == [(0, 3), (1, 4), (2, 5)]

    def test_two_separation_cuts_are_odd(self, c6):
        for sep in two_separations(c6):
            assert all(c.odd for c in sep.cuts)


class TestTightCuts:
    """Nontrivial tight cut search and decomposition trees."""

    @pytest.mark.parametrize("name", ["K4", "K33", "prism", "petersen", "C4"])
    def test_no_nontrivial_tight_cut(self, named, name):
        assert find_nontrivial_tight_cut(named[name]) is None

    def test_c6_has_tight_cut(self, c6):
        cut = find_nontrivial_tight_cut(c6)
        assert cut is not None
        assert not cut.trivial
        assert is_tight_cut(c6, cut)

    def test_k4_is_single_brick(self, k4):
        tree = tight_cut_decomposition(k4)
        assert isinstance(tree, DecompositionLeaf)
        assert tree.kind == "brick"
        assert tree.edge_map == tuple(range(6))

    def test_c6_splits_into_braces(self, c6):
        tree = tight_cut_decomposition(c6)
        assert isinstance(tree, DecompositionNode)
        assert len(tree.cut.shore) == 3
        kinds = [leaf.kind for leaf in iter_leaves(tree)]
        assert kinds == ["brace", "brace"]
        assert all(leaf.graph.n == 4 for leaf in iter_leaves(tree))

    def test_leaf_edges_map_to_root(self, c6):
        tree = tight_cut_decomposition(c6)
        leaves = list(iter_leaves(tree))
        assert all(len(leaf.edge_map) == leaf.graph.m for leaf in leaves)
        assert set().union(*(leaf.edge_map for leaf in leaves)) == set(range(c6.m))

    def test_not_matching_covered(self, path4):
        with pytest.raises(NotMatchingCoveredError) as exc:
            tight_cut_decomposition(path4)
        assert exc.value.uncovered == (1,)

    def test_brick_count_independent_of_cut_order(self, named):
        """Different candidate orders give the same number of bricks."""
        for name in ("C6", "CL5", "petersen+parallel"):
            counts = {brick_count(named[name], random.Random(seed)) for seed in range(4)}
            assert counts == {brick_count(named[name])}, name

    def test_two_bricks(self):
        """Two K4s sharing the pair {0, 1}: the 2-separation cut is tight and both sides are bricks."""
        g = MultiGraph(
            6,
            ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3), (0, 4), (0, 5), (1, 4), (1, 5), (4, 5)),
        )
        assert is_tight_cut(g, Cut.of(g, {0, 2, 3}))
        assert brick_count(g) == 2
        assert lattice_dimension(g) == 5


class TestDimensions:
    @pytest.mark.parametrize("name", sorted(LATTICE_DIMS))
    def test_lattice_dimension(self, named, name):
        assert lattice_dimension(named[name]) == LATTICE_DIMS[name]

    def test_polytope_dimension_of_petersen(self, petersen):
        assert polytope_dimension(petersen) == 5

    def test_bricks_of_named_graphs(self, named):
        assert brick_count(named["C6"]) == 0
        assert brick_count(named["K33"]) == 0
        assert brick_count(named["K4"]) == 1
        assert brick_count(named["CL5"]) == 1

    def test_disconnected_dimension(self):
        """Two disjoint 4-cycles: each face contributes one dimension."""
        g = MultiGraph(8, ((0, 1), (1, 2), (2, 3), (0, 3), (4, 5), (5, 6), (6, 7), (4, 7)))
        assert polytope_dimension(g) == 2
        assert lattice_dimension(g) == 3


class TestClassification:
    def test_petersen_recognition(self, named):
        assert is_petersen_graph(named["petersen"])
        assert is_petersen_graph(named["petersen+parallel"])
        assert not is_petersen_graph(named["CL5"])

    def test_bricks(self, named):
        assert is_brick(named["K4"])
        assert is_brick(named["prism"])
        assert is_brick(named["petersen"])
        assert not is_brick(named["C6"])
        assert not is_brick(named["K33"])

    def test_near_bricks(self, named):
        assert is_near_brick(named["K4"])
        assert not is_near_brick(named["C6"])

"""
Tests for multigraphs, perfect matching primitives and cuts.
"""
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from app.core.exceptions import (
    EnumerationOverflowError,
    NoPerfectMatchingError,
    PreconditionError,
)
from app.graph import (
    Cut,
    Matching,
    MultiGraph,
    contract,
    contractions,
    covered_edges,
    enumerate_perfect_matchings,
    has_perfect_matching,
    is_matching_covered,
    is_separating_cut,
    is_tight_cut,
    matching_covered_core,
    max_weight_perfect_matching,
    perfect_matching_with,
    phi,
    phi_profile,
)
from app.graph.cuts import max_crossing

PRISM_RUNGS = (2, 4, 5)


@st.composite
def small_multigraphs(draw):
    n = draw(st.sampled_from([2, 4, 6]))
    pairs = st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)).filter(lambda p: p[0] != p[1])
    edges = draw(st.lists(pairs, min_size=1, max_size=10))
    return MultiGraph(n, tuple(edges))


class TestMultiGraph:
    """Value type checks and id-preserving derived graphs."""

    def test_rejects_self_loop(self):
        """A self-loop is refused with its edge id."""
        with pytest.raises(PreconditionError) as exc:
            MultiGraph(3, ((0, 1), (2, 2)))
        assert exc.value.details == {"edge": 1}

    def test_rejects_out_of_range(self):
        with pytest.raises(PreconditionError):
            MultiGraph(2, ((0, 2),))

    def test_from_networkx_sorts_edges(self, prism):
        """circular_ladder_graph(3): triangles 0-2 and 3-5, rungs i to i+3."""
        assert prism.edges == (
            (0, 1), (0, 2), (0, 3), (1, 2), (1, 4), (2, 5), (3, 4), (3, 5), (4, 5)
        )

    def test_parallel_classes(self, named):
        classes = named["petersen+parallel"].parallel_classes()
        assert classes[(0, 5)] == [2, 15]
        assert sum(len(ids) for ids in classes.values()) == 16

    def test_induced_keeps_edge_map(self, prism):
        sub = prism.induced({3, 4, 5})
        assert sub.graph.n == 3
        assert sub.edge_map == (6, 7, 8)
        assert sub.lift_vertices({0}) == frozenset({3})

    def test_components(self):
        g = MultiGraph(4, ((0, 1), (2, 3)))
        parts = g.components()
        assert [p.vertex_map for p in parts] == [(0, 1), (2, 3)]
        assert not g.is_connected


class TestMatching:
    def test_normalizes_edge_ids(self):
        assert Matching((3, 1, 1)).edge_ids == (1, 3)

    def test_incidence_vector(self):
        assert Matching((0, 2)).incidence_vector(4) == (1, 0, 1, 0)

    def test_perfect_matching_check(self, k4):
        assert Matching((0, 5)).is_perfect_matching_of(k4)
        assert not Matching((0, 3)).is_perfect_matching_of(k4)
        assert not Matching((0,)).is_perfect_matching_of(k4)


class TestPerfectMatchings:
    """Blossom queries and enumeration."""

    @pytest.mark.parametrize("name,count", [("K4", 3), ("C6", 2), ("K33", 6), ("prism", 4), ("petersen", 6)])
    def test_enumeration_counts(self, named, name, count):
        assert len(enumerate_perfect_matchings(named[name], cap=100)) == count

    def test_enumeration_order_is_deterministic(self, k4):
        """Branching on the smallest vertex, edges by ascending id."""
        found = enumerate_perfect_matchings(k4, cap=10)
        assert [m.edge_ids for m in found] == [(0, 5), (1, 4), (2, 3)]

    def test_enumeration_overflow(self, k4):
        with pytest.raises(EnumerationOverflowError) as exc:
            enumerate_perfect_matchings(k4, cap=2)
        assert exc.value.cap == 2

    def test_enumeration_cap_must_be_positive(self, k4):
        with pytest.raises(PreconditionError):
            enumerate_perfect_matchings(k4, cap=0)

    def test_has_perfect_matching_after_removal(self, k4):
        assert has_perfect_matching(k4, removed=(0, 1))
        assert not has_perfect_matching(k4, removed=(0,))

    def test_perfect_matching_with_include(self, prism):
        found = perfect_matching_with(prism, include=(2,))
        assert found is not None
        assert 2 in found
        assert found.is_perfect_matching_of(prism)

    def test_perfect_matching_with_exclude_all_rungs(self, prism):
        """Two triangles alone have no perfect matching."""
        assert perfect_matching_with(prism, exclude=PRISM_RUNGS) is None

    def test_include_exclude_overlap(self, prism):
        with pytest.raises(PreconditionError):
            perfect_matching_with(prism, include=(2,), exclude=(2,))

    def test_max_weight_on_rungs(self, prism):
        weights = [1 if e in PRISM_RUNGS else 0 for e in range(prism.m)]
        assert max_weight_perfect_matching(prism, weights, "max").edge_ids == PRISM_RUNGS
        assert max_weight_perfect_matching(prism, weights, "min").crossings(PRISM_RUNGS) == 1

    def test_weights_length_checked(self, prism):
        with pytest.raises(PreconditionError):
            max_weight_perfect_matching(prism, [1, 2])


class TestMatchingCovered:
    def test_named_graphs_are_matching_covered(self, named):
        for name, g in named.items():
            assert is_matching_covered(g) == (True, ()), name

    def test_path_is_not_matching_covered(self, path4):
        assert is_matching_covered(path4) == (False, (1,))
        assert covered_edges(path4) == frozenset({0, 2})

    def test_core_drops_inadmissible_edges(self, path4):
        assert matching_covered_core(path4).edge_map == (0, 2)

    def test_core_without_perfect_matching(self):
        triangle = MultiGraph(3, ((0, 1), (1, 2), (0, 2)))
        with pytest.raises(NoPerfectMatchingError):
            matching_covered_core(triangle)

    def test_disconnected_graph_is_not_matching_covered(self):
        g = MultiGraph(4, ((0, 1), (2, 3)))
        assert is_matching_covered(g) == (False, ())


class TestCuts:
    """Cut orientation, contraction and crossing statistics."""

    def test_shore_avoids_vertex_zero(self, prism):
        c = Cut.of(prism, {0, 1, 2})
        assert c.shore == frozenset({3, 4, 5})
        assert c.edge_ids == frozenset(PRISM_RUNGS)
        assert c.odd and not c.trivial

    def test_trivial_cut(self, prism):
        assert Cut.of(prism, {4}).trivial

    def test_improper_shore(self, prism):
        with pytest.raises(PreconditionError):
            Cut.of(prism, range(6))

    def test_contract_triangle_gives_k4(self, prism):
        part = contract(prism, {3, 4, 5})
        assert part.graph.n == 4
        assert part.contracted_vertex == 3
        assert part.edge_map == (0, 1, 2, 3, 4, 5)
        assert sorted(part.graph.degree(v) for v in range(4)) == [3, 3, 3, 3]
        assert part.preimage(3, prism.n) == frozenset({3, 4, 5})

    def test_rung_cut_statistics(self, prism):
        c = Cut.of(prism, {3, 4, 5})
        assert phi(prism, c) == 1
        assert max_crossing(prism, c) == 3
        assert not is_tight_cut(prism, c)
        assert is_separating_cut(prism, c)
        assert phi_profile(prism, c) == (1,) * prism.m

    def test_cycle_cut_is_tight(self, c6):
        c = Cut.of(c6, {1, 2, 3})
        assert c.edge_ids == frozenset({0, 4})
        assert is_tight_cut(c6, c)

    def test_contractions_order(self, prism):
        c = Cut.of(prism, {3, 4, 5})
        first, second = contractions(prism, c)
        assert first.preimage(first.contracted_vertex, prism.n) == c.shore
        assert second.preimage(second.contracted_vertex, prism.n) == c.complement


class TestMatchingProperties:
    @settings(max_examples=40, deadline=None)
    @given(small_multigraphs())
    def test_enumeration_agrees_with_covered_edges(self, g):
        """Every enumerated matching is perfect, and together they use exactly the admissible edges."""
        found = enumerate_perfect_matchings(g, cap=10000)
        assert len(set(found)) == len(found)
        assert all(m.is_perfect_matching_of(g) for m in found)
        used = frozenset(e for m in found for e in m)
        assert used == covered_edges(g)
        assert has_perfect_matching(g) == bool(found)

    @settings(max_examples=40, deadline=None)
    @given(small_multigraphs(), st.data())
    def test_blossom_agrees_with_enumeration(self, g, data):
        """Blossom optima, phi and tightness match the brute-force values."""
        found = enumerate_perfect_matchings(g, cap=10000)
        assume(found)
        weights = data.draw(st.lists(st.integers(-3, 3), min_size=g.m, max_size=g.m))
        totals = [sum(weights[e] for e in m) for m in found]
        for sense, best in (("max", max(totals)), ("min", min(totals))):
            optimum = max_weight_perfect_matching(g, weights, sense)
            assert sum(weights[e] for e in optimum) == best

        size = data.draw(st.sampled_from([k for k in range(1, g.n) if k % 2 == 1]))
        shore = data.draw(st.sets(st.integers(0, g.n - 1), min_size=size, max_size=size))
        c = Cut.of(g, shore)
        crossings = [m.crossings(c.edge_ids) for m in found]
        assert phi(g, c) == min(crossings)
        assert is_tight_cut(g, c) == (max(crossings) == 1)

import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from klocal.errors import InfeasibleGraph, InstanceError
from klocal.hypergraph import (
    Coloring,
    Hypergraph,
    chain_hypergraph,
    conflict_graph,
    degree_stats,
    equitable_coloring,
    erdos_renyi_hypergraph,
    overlap_pair_count,
    random_proper_coloring,
    regular_hypergraph,
    validate_coloring,
)

TRIANGLE = Hypergraph(3, 2, [(0, 1), (1, 2), (0, 2)])
PATH = Hypergraph(4, 2, [(0, 1), (1, 2), (2, 3)])


@st.composite
def hypergraphs(draw, max_n=20):
    k = draw(st.sampled_from([2, 3]))
    n = draw(st.integers(k, max_n))
    m = draw(st.integers(1, 3 * n))
    edges = [tuple(draw(st.permutations(range(n)))[:k]) for _ in range(m)]
    return Hypergraph(n, k, edges)


class TestHypergraph:
    def test_edges_sorted(self):
        g = Hypergraph(3, 2, [(2, 1)])
        assert g.edges == ((1, 2),)

    @pytest.mark.parametrize(
        "n,k,edges",
        [
            (3, 2, [(0, 1, 2)]),  # wrong size
            (3, 2, [(0, 0)]),  # repeated vertex
            (3, 2, [(0, 3)]),  # out of range
            (3, 2, []),  # no edges
        ],
    )
    def test_invalid(self, n, k, edges):
        with pytest.raises(InstanceError):
            Hypergraph(n, k, edges)

    def test_dict_round_trip(self):
        assert Hypergraph.from_dict(TRIANGLE.to_dict()) == TRIANGLE


class TestDegreeStats:
    def test_triangle(self):
        s = degree_stats(TRIANGLE)
        assert s.per_vertex == (2, 2, 2)
        assert s.max_degree == 2
        assert s.avg_degree == 2

    def test_single_edge(self):
        s = degree_stats(Hypergraph(2, 2, [(0, 1)]))
        assert s.per_vertex == (1, 1)
        assert (s.max_degree, s.avg_degree) == (1, 1)

    def test_star(self):
        s = degree_stats(Hypergraph(4, 2, [(0, 1), (0, 2), (0, 3)]))
        assert s.max_degree == 3
        assert s.per_vertex[0] == 3
        assert s.avg_degree == Fraction(3, 2)

    @given(hypergraphs())
    @settings(max_examples=200, deadline=None)
    def test_handshake(self, g):
        s = degree_stats(g)
        assert sum(s.per_vertex) == g.k * g.m
        assert s.avg_degree * g.n == g.k * g.m


class TestConflictGraph:
    def test_triangle_is_k3(self):
        adj = conflict_graph(TRIANGLE)
        assert adj == [{1, 2}, {0, 2}, {0, 1}]

    def test_disjoint(self):
        adj = conflict_graph(Hypergraph(4, 2, [(0, 1), (2, 3)]))
        assert adj == [set(), set()]

    def test_path(self):
        adj = conflict_graph(PATH)
        assert adj == [{1}, {0, 2}, {1}]
        assert max(map(len, adj)) <= 2 * (degree_stats(PATH).max_degree - 1)

    def test_duplicate_edges_conflict(self):
        adj = conflict_graph(Hypergraph(2, 2, [(0, 1), (0, 1)]))
        assert adj == [{1}, {0}]

    @given(hypergraphs())
    @settings(max_examples=200, deadline=None)
    def test_degree_bound(self, g):
        adj = conflict_graph(g)
        assert max(map(len, adj)) <= g.k * (degree_stats(g).max_degree - 1)

    def test_overlap_pair_count(self):
        # 3 diagonal pairs + 6 ordered conflicting pairs
        assert overlap_pair_count(TRIANGLE) == 9


def _all_equitable_colorings(g, r):
    """Brute force: every assignment of r colors that is proper and equitable."""
    adj = conflict_graph(g)
    found = set()
    for colors in itertools.product(range(r), repeat=g.m):
        if any(colors[i] == colors[j] for i in range(g.m) for j in adj[i]):
            continue
        sizes = [colors.count(c) for c in range(r)]
        if max(sizes) - min(sizes) <= 1:
            classes = frozenset(
                frozenset(i for i in range(g.m) if colors[i] == c) for c in range(r)
            )
            found.add(classes)
    return found


class TestEquitableColoring:
    def test_triangle(self):
        c = equitable_coloring(TRIANGLE)
        assert c.r == 3
        assert sorted(c.sizes) == [1, 1, 1]

    def test_single_edge(self):
        c = equitable_coloring(Hypergraph(2, 2, [(0, 1)]))
        assert c.r == 1
        assert c.sizes == (1,)

    def test_path_against_enumeration(self):
        c = equitable_coloring(PATH)
        assert c.r == 3
        brute = _all_equitable_colorings(PATH, 3)
        assert brute
        assert frozenset(frozenset(cl) for cl in c.classes) in brute

    def test_matching_one_color(self):
        g = Hypergraph(6, 2, [(0, 1), (2, 3), (4, 5)])
        c = equitable_coloring(g)
        assert c.r == 1 and c.sizes == (3,)

    def test_fewer_edges_than_colors(self):
        g = Hypergraph(5, 3, [(0, 1, 2), (2, 3, 4)])
        c = equitable_coloring(g)
        assert c.r == 4
        assert sorted(c.sizes) == [0, 0, 1, 1]
        assert validate_coloring(g, c)[0]

    @given(hypergraphs())
    @settings(max_examples=300, deadline=None)
    def test_guarantees(self, g):
        c = equitable_coloring(g)
        assert c.r == g.k * (degree_stats(g).max_degree - 1) + 1
        assert max(c.sizes) - min(c.sizes) <= 1
        ok, problems = validate_coloring(g, c)
        assert ok, problems

    def test_deterministic(self):
        g = erdos_renyi_hypergraph(12, 3, 20, np.random.default_rng(5))
        assert equitable_coloring(g) == equitable_coloring(g)


class TestValidateColoring:
    def test_valid(self):
        assert validate_coloring(TRIANGLE, Coloring([(0,), (1,), (2,)])) == (True, [])

    def test_overlap_named(self):
        ok, problems = validate_coloring(TRIANGLE, Coloring([(0, 1), (2,), ()]))
        assert not ok
        assert any("edges 0 and 1" in p for p in problems)

    def test_not_equitable(self):
        g = Hypergraph(6, 2, [(0, 1), (2, 3), (4, 5)])
        ok, problems = validate_coloring(g, Coloring([(0, 1, 2), (), ()]))
        assert not ok
        assert any("equitable" in p for p in problems)
        assert validate_coloring(g, Coloring([(0, 1, 2), (), ()]), require_equitable=False)[0]

    def test_missing_and_duplicate(self):
        ok, problems = validate_coloring(TRIANGLE, Coloring([(0,), (0,), (1,)]))
        assert not ok
        assert any("uncolored" in p for p in problems)
        assert any("appears in classes" in p for p in problems)

    @given(hypergraphs(), st.integers(0, 2**32 - 1))
    @settings(max_examples=100, deadline=None)
    def test_random_proper_colorings_valid(self, g, seed):
        c = random_proper_coloring(g, np.random.default_rng(seed))
        assert validate_coloring(g, c, require_equitable=False)[0]


class TestGenerators:
    def test_regular(self):
        g = regular_hypergraph(8, 2, 3, np.random.default_rng(0))
        assert g.m == 12
        assert degree_stats(g).per_vertex == (3,) * 8

    def test_regular_k3(self):
        g = regular_hypergraph(9, 3, 4, np.random.default_rng(1))
        assert degree_stats(g).per_vertex == (4,) * 9
        assert g.m == 12

    def test_parity(self):
        with pytest.raises(InfeasibleGraph, match="not divisible"):
            regular_hypergraph(5, 2, 3, np.random.default_rng(0))

    def test_chain(self):
        assert chain_hypergraph(6).edges == ((0, 1), (1, 2), (2, 3), (3, 4), (4, 5))

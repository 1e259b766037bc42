import math
from fractions import Fraction

import numpy as np
import pytest

from klocal.bounds import (
    anshu_bound_exponent,
    chebyshev_bound,
    chernoff_corollary,
    chernoff_prop1,
    corollary_exponent,
    equitable_intermediate,
    exponent_ratio,
    ks_bound,
    ks_exponent,
    lemma2_bound,
    prop1_floor,
    proof_chain,
    typical_directions,
    verify_bounds,
)
from klocal.hamiltonian import PAULI, LocalHamiltonian, LocalTerm, random_instance
from klocal.hypergraph import Coloring, Hypergraph, equitable_coloring, random_proper_coloring

GAMMAS = [0.25, 0.5, 0.75, 1.0, 1.5]


class TestChebyshev:
    def test_example(self):
        assert chebyshev_bound(2, 16, 1) == 0.25

    def test_vacuous(self):
        assert chebyshev_bound(1, 1, 1) == 1

    def test_monotone(self):
        vals = [chebyshev_bound(2, 10, g) for g in (0.1, 1, 10, 1e3)]
        assert vals == sorted(vals, reverse=True)
        assert vals[-1] == pytest.approx(1e-6 * 4 / 10)


class TestChernoff:
    def test_example(self):
        assert chernoff_prop1(16, 2, 3, 3, 1.0) == pytest.approx(6 * math.exp(-2))
        assert chernoff_prop1(16, 2, 3, 3, 1.0) == pytest.approx(0.81201, abs=1e-5)

    def test_floor_zero(self):
        assert prop1_floor(3, 2, 3, 3) == 0
        assert chernoff_prop1(3, 2, 3, 3, 1.0) == 6

    @pytest.mark.parametrize("n,k,deg", [(16, 2, 3), (27, 3, 2), (10, 2, 1)])
    def test_regular_specialisation(self, n, k, deg):
        for g in GAMMAS:
            assert chernoff_prop1(n, k, deg, deg, g) == chernoff_corollary(n, k, deg, g)

    def test_exact_floor_at_integer_boundary(self):
        # n=13, k=2, m=30, d_max=5: n / (k^2 d_max / d_avg) is exactly 3
        d_avg = Fraction(2 * 30, 13)
        assert prop1_floor(13, 2, 5, d_avg) == 3
        assert math.floor(13 / (4 * (5 / float(d_avg)))) == 2  # naive float floor is off by one
        assert chernoff_prop1(13, 2, 5, d_avg, 1.0) == pytest.approx(10 * math.exp(-1.5))

    def test_rejects_bad_degrees(self):
        with pytest.raises(ValueError):
            chernoff_prop1(10, 2, 2, 3, 1.0)


class TestColoringSum:
    def test_single_class(self):
        assert lemma2_bound([5], 1.0) == pytest.approx(math.exp(-2.5))

    def test_triangle(self):
        assert lemma2_bound(Coloring([(0,), (1,), (2,)]), 1.0) == pytest.approx(3 * math.exp(-0.5))
        assert lemma2_bound([1, 1, 1], 1.0) == pytest.approx(1.8196, abs=1e-4)

    def test_empty_class_counts_one(self):
        assert lemma2_bound([0, 2], 1.0) == pytest.approx(1 + math.exp(-1))

    @pytest.mark.parametrize("seed", range(5))
    def test_equitable_below_intermediate(self, seed):
        h = random_instance(9, 2, 3, graph="erdos_renyi", num_edges=10, seed=seed)
        c = equitable_coloring(h.graph)
        for g in GAMMAS:
            assert lemma2_bound(c, g) <= equitable_intermediate(h.m, c.r, g) + 1e-12


class TestComparisons:
    def test_ks_examples(self):
        k = 2
        n = 16 * math.e**3 * k**3
        assert ks_bound(n, k, 1.0) == pytest.approx(math.exp(-1))
        assert ks_bound(100, 2, 0.0) == 1

    def test_factor_160k(self):
        for k in (1, 2, 3, 4):
            assert exponent_ratio(k * k * 50, k) == pytest.approx(8 * math.e**3 * k)
            assert math.floor(8 * math.e**3) == 160

    @pytest.mark.parametrize("k", [1, 2, 3, 4])
    def test_exponent_grid(self, k):
        for n in range(1, 400):
            for g in (0.1, 0.5, 1.0, 2.0):
                if n // (k * k) >= n / (8 * math.e**3 * k**3):
                    assert corollary_exponent(n, k, g) >= ks_exponent(n, k, g)

    def test_short_range_exponent(self):
        assert anshu_bound_exponent(12, 2, 1, 1.0) == 12 / 8
        assert anshu_bound_exponent(12, 2, 6, 1.0) == anshu_bound_exponent(12, 2, 3, 1.0) / 2
        # complete graph: D ~ n, so the exponent stays bounded as n grows
        ex = [anshu_bound_exponent(n, 2, n - 1, 1.0) for n in (10, 100, 1000)]
        assert max(ex) < 2 / 8


class TestVerifyBounds:
    def test_zero(self):
        h = random_instance(4, 2, 2, graph="chain", terms="zero")
        for r in verify_bounds(h, GAMMAS):
            assert r.exact_lower_tail == 0 and r.exact_upper_tail == 0
            assert r.all_satisfied

    def test_regular_gue_n10(self):
        h = random_instance(10, 2, 2, graph="regular", degree=3, terms="gue", seed=0)
        reports = verify_bounds(h, [0.5, 0.75, 1.0])
        for r in reports:
            assert set(r.satisfied) == {"chebyshev", "chernoff_prop1", "chernoff_cor", "lemma2"}
            assert r.all_satisfied, r.violations()
            assert r.chernoff_cor == r.chernoff_prop1

    def test_irregular_skips_regular_only_bounds(self):
        h = random_instance(6, 2, 2, graph="chain", seed=1)
        r = verify_bounds(h, [0.5])[0]
        assert r.chernoff_cor is None
        assert set(r.satisfied) == {"chernoff_prop1", "lemma2"}

    @pytest.mark.parametrize("pauli", ["Z", "X"])
    def test_adversarial_aligned(self, pauli):
        # identical commuting terms: spectrum of H is as spread as possible
        g = Hypergraph(8, 2, [(i, (i + 1) % 8) for i in range(8)])
        p = np.kron(PAULI[pauli], PAULI[pauli])
        h = LocalHamiltonian(g, 2, [LocalTerm(e, p) for e in g.edges])
        for r in verify_bounds(h, GAMMAS):
            assert r.all_satisfied, r.violations()

    def test_adversarial_projectors(self):
        h = random_instance(9, 2, 3, graph="regular", degree=3, terms="projector", seed=2)
        assert all(r.all_satisfied for r in verify_bounds(h, GAMMAS))

    def test_coloring_sum_random_colorings(self):
        h = random_instance(8, 2, 2, graph="erdos_renyi", num_edges=9, seed=3)
        rng = np.random.default_rng(0)
        for _ in range(10):
            c = random_proper_coloring(h.graph, rng)
            for r in verify_bounds(h, GAMMAS, coloring=c):
                assert r.satisfied["lemma2"]

    def test_report_dict(self):
        h = random_instance(4, 2, 2, graph="chain", seed=0)
        d = verify_bounds(h, [1.0])[0].to_dict()
        assert {"gamma", "exact_lower_tail", "chernoff_prop1", "lemma2_sum", "satisfied"} <= set(d)


class TestProofChain:
    @pytest.mark.parametrize("seed", range(8))
    def test_chain_holds(self, seed):
        h = random_instance(8, 2, 2 + seed % 2, graph="erdos_renyi", num_edges=6 + seed, seed=seed)
        c = equitable_coloring(h.graph)
        for g in GAMMAS:
            pc = proof_chain(h, c, g)
            assert pc.holds()
            assert pc.rounded == pytest.approx(pc.chernoff_prop1, rel=1e-12)


def test_typical_directions_regular():
    h = random_instance(8, 2, 2, graph="regular", degree=3, seed=4)
    rep = typical_directions(h, 0.9)
    assert rep.n_directions == 256
    assert rep.holds

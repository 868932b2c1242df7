"""Implicit Kikuchi graph queries against exact formulas and brute force."""

import math
from fractions import Fraction

import numpy as np
import pytest

from evencover import (
    CapacityError,
    EmptyGraphError,
    Hypergraph,
    IsolatedVertexError,
    KikuchiGraph,
    RngStream,
    compute_params,
    compute_params_from_counts,
    sample_uniform_hypergraph,
)
from evencover.oracles import exact_stationary_distribution, proportion_test, tv_distance


class TestParams:
    def test_exact_formula(self):
        p = compute_params_from_counts(n=8, k=4, m=3, ell=2)
        assert p.N == 28
        assert p.d_bar == Fraction(math.comb(4, 0) * math.comb(4, 2) * 3, 28)
        assert p.delta == math.comb(4, 2) * 3 / 8 ** 2
        assert p.d_bar_asymptotic == 2 ** 2 * p.delta

    def test_level_band(self):
        compute_params_from_counts(8, 4, 3, ell=2)
        compute_params_from_counts(8, 4, 3, ell=6)
        for ell in (1, 7):
            with pytest.raises(ValueError, match="outside"):
                compute_params_from_counts(8, 4, 3, ell=ell)

    def test_k_validation(self):
        for n, k in ((8, 3), (8, 0), (4, 6)):
            with pytest.raises(ValueError, match="even k"):
                compute_params_from_counts(n, k, 1, ell=2)

    def test_m_validation(self):
        with pytest.raises(ValueError, match="outside"):
            compute_params_from_counts(8, 4, -1, ell=2)
        with pytest.raises(ValueError, match="outside"):
            compute_params_from_counts(8, 4, math.comb(8, 4) + 1, ell=2)

    def test_zero_edges_allowed(self):
        p = compute_params_from_counts(8, 4, 0, ell=2)
        assert p.d_bar == 0

    def test_log_views(self):
        p = compute_params_from_counts(100, 4, 50, ell=50)
        assert p.log2_N == pytest.approx(math.log2(p.N), rel=1e-12)
        assert p.ln_N == pytest.approx(math.log(p.N), rel=1e-12)

    def test_graph_exposes_params(self, gadget4):
        g = KikuchiGraph(gadget4, 2)
        assert g.params == compute_params(gadget4, 2)


class TestImplicitQueries:
    def test_incident_edges(self, gadget4):
        g = KikuchiGraph(gadget4, 2)
        assert g.incident_edges((0, 1)).tolist() == [0, 1]
        assert g.incident_edges((0, 6)).tolist() == []
        assert g.degree((0, 1)) == 2

    def test_neighbor_via(self, gadget4):
        g = KikuchiGraph(gadget4, 2)
        assert g.neighbor_via((0, 1), 0) == (2, 3)
        assert g.neighbor_via((0, 1), 1) == (4, 5)
        with pytest.raises(ValueError, match="not incident"):
            g.neighbor_via((0, 1), 2)

    def test_vertex_validation(self, gadget4):
        g = KikuchiGraph(gadget4, 2)
        for bad in ((0,), (1, 0), (0, 0), (0, 8), (-1, 3)):
            with pytest.raises(ValueError):
                g.degree(bad)

    def test_sample_neighbor_uniform(self, gadget4):
        g = KikuchiGraph(gadget4, 2)
        gen = RngStream(21).child("nbr").generator()
        draws = 4000
        hits = 0
        for _ in range(draws):
            nbr, color = g.sample_neighbor((0, 1), gen)
            assert nbr in ((2, 3), (4, 5))
            hits += color == 0
        check = proportion_test("neighbor color split", hits, draws, 0.5)
        assert check.passed, check.describe()

    def test_isolated_vertex(self, gadget4):
        g = KikuchiGraph(gadget4, 2)
        with pytest.raises(IsolatedVertexError):
            g.sample_neighbor((0, 6), RngStream(0).child("x"))

    def test_agrees_with_materialized(self):
        # popcount queries vs set-arithmetic brute force, every vertex, k=6 too
        h = sample_uniform_hypergraph(12, 6, 30, RngStream(31).child("h"))
        g = KikuchiGraph(h, 3)
        mat = g.materialize()
        for i, w in enumerate(mat.vertices):
            assert g.degree(w) == mat.degrees[i]
            implied = {
                (mat.index[g.neighbor_via(w, int(c))], int(c))
                for c in g.incident_edges(w)
            }
            assert implied == mat.neighbor_set(w)


class TestStationarySampling:
    def test_rows_sorted_and_in_range(self, gadget4):
        g = KikuchiGraph(gadget4, 3)
        rows = g.sample_stationary_vertices(RngStream(7).child("s"), 500)
        assert rows.shape == (500, 3)
        assert np.all(rows[:, 1:] > rows[:, :-1])
        assert rows.min() >= 0 and rows.max() < 8

    def test_matches_exact_distribution(self, gadget4):
        g = KikuchiGraph(gadget4, 2)
        mat = g.materialize()
        exact = exact_stationary_distribution(mat)
        rows = g.sample_stationary_vertices(RngStream(13).child("pi"), 100_000)
        tallies = {w: 0 for w in mat.vertices}
        for row in map(tuple, rows.tolist()):
            tallies[row] += 1
        counts = [tallies[w] for w in mat.vertices]
        probs = [float(exact[w]) for w in mat.vertices]
        assert tv_distance(counts, probs) <= 0.02

    def test_single_draw_helper(self, gadget4):
        g = KikuchiGraph(gadget4, 2)
        w = g.sample_stationary_vertex(RngStream(3).child("one"))
        assert len(w) == 2
        assert g.degree(w) >= 1

    def test_empty_graph_rejected(self):
        g = KikuchiGraph(Hypergraph(6, 4, []), 2)
        with pytest.raises(EmptyGraphError):
            g.sample_stationary_vertices(RngStream(0).child("e"), 10)


class TestMaterialized:
    def test_vertex_cap(self):
        g = KikuchiGraph(Hypergraph(60, 4, [(0, 1, 2, 3)]), 4)
        with pytest.raises(CapacityError):
            g.materialize()

    def test_average_degree_matches_formula(self, gadget4):
        for ell in (2, 3, 4):
            g = KikuchiGraph(gadget4, ell)
            assert g.materialize().average_degree() == g.params.d_bar

    def test_edge_count_handshake(self, gadget4):
        mat = KikuchiGraph(gadget4, 2).materialize()
        assert mat.edge_count == sum(mat.degrees) // 2
        assert mat.edge_count == 12

    def test_neighbor_set(self, gadget4):
        mat = KikuchiGraph(gadget4, 2).materialize()
        expected = {(mat.index[(2, 3)], 0), (mat.index[(4, 5)], 1)}
        assert mat.neighbor_set((0, 1)) == expected

    def test_to_dot(self, gadget4):
        mat = KikuchiGraph(gadget4, 2).materialize()
        dot = mat.to_dot()
        assert dot.startswith("graph kikuchi {")
        assert dot.count(" -- ") == mat.edge_count
        assert '"0_1" -- "2_3" [label=0];' in dot

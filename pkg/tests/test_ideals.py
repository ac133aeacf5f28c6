"""Unit tests for admissible pairs, theta, quotients, and the matrix
front-end."""

import pytest

from ultragraph.builder import GraphBuilder
from ultragraph.ideals import (AdmissiblePair, IdealG0, InfiniteUniverse,
                               ZeroRow, check_admissible,
                               check_range_xset_equivalence,
                               enumerate_admissible_pairs,
                               enumerate_graph_pairs, fin_inf_vertices,
                               g0_algebra, graph_is_hereditary,
                               graph_is_saturated, is_hereditary,
                               is_saturated, matrix_to_ultragraph,
                               parse_matrix_file, quotient_graph, theta,
                               verify_ideal_correspondence)
from ultragraph.cli import make_builder
from ultragraph.dsl import SpecUltragraph, example_fig1
from ultragraph.model import FiniteUltragraph, GraphVertex
from ultragraph.upset import UPSet


def two_vertex():
    return FiniteUltragraph(2, [(1, {2})])


class TestAlgebra:
    def test_two_vertex_closure(self):
        alg = g0_algebra(two_vertex())
        assert sorted(map(sorted, alg.members)) == [[], [1], [1, 2], [2]]
        assert sorted(map(sorted, alg.atoms)) == [[1], [2]]

    def test_no_edge_singleton(self):
        alg = g0_algebra(FiniteUltragraph(1, []))
        assert sorted(map(sorted, alg.members)) == [[], [1]]

    def test_differences_generate_power_set(self):
        g = FiniteUltragraph(3, [(1, {1, 2}), (2, {2, 3})])
        assert len(g0_algebra(g).members) == 8

    def test_infinite_universe_rejected(self):
        with pytest.raises(InfiniteUniverse):
            g0_algebra(example_fig1())

    def test_ideal_membership(self):
        alg = g0_algebra(two_vertex())
        ideal = IdealG0(alg, frozenset({2}))
        assert {2} in ideal and {1} not in ideal and set() in ideal
        assert [sorted(m) for m in ideal.members()] == [[], [2]]


class TestAdmissibility:
    def test_singleton_range_ideal_fails_saturation(self):
        g = two_vertex()
        alg = g0_algebra(g)
        ideal = IdealG0(alg, frozenset({2}))
        assert is_hereditary(g, ideal)
        assert not is_saturated(g, ideal)

    def test_hereditary_failure(self):
        g = FiniteUltragraph(2, [(2, {1}), (2, {2})])
        ideal = IdealG0(g0_algebra(g), frozenset({2}))
        assert not is_hereditary(g, ideal)

    def test_enumeration_matches_worked_counts(self):
        assert len(enumerate_admissible_pairs(two_vertex())) == 2
        assert len(enumerate_admissible_pairs(FiniteUltragraph(1, []))) == 2

    def test_check_admissible_flags_bad_pair(self):
        g = two_vertex()
        bad = AdmissiblePair(IdealG0(g0_algebra(g), frozenset({2})),
                             frozenset())
        assert "not saturated" in check_admissible(g, bad)

    def test_fin_inf_empty_for_finite(self):
        g = two_vertex()
        ideal = IdealG0(g0_algebra(g), frozenset())
        assert fin_inf_vertices(g, ideal) == frozenset()


class TestGraphSide:
    def build(self, g):
        b = GraphBuilder(g)
        return b, b.build_e(g.edge_count, g.universe_size, g.edge_count)

    def test_two_vertex_pairs(self):
        _, built = self.build(two_vertex())
        pairs = enumerate_graph_pairs(built)
        assert sorted(len(p.h) for p in pairs) == [0, 2]

    def test_hereditary_saturated_predicates(self):
        _, built = self.build(two_vertex())
        v1, v2 = GraphVertex(1), GraphVertex(2)
        assert graph_is_hereditary(built, frozenset({v1, v2}))
        assert not graph_is_hereditary(built, frozenset({v1}))
        assert not graph_is_saturated(built, frozenset({v2}))

    def test_theta(self):
        g = two_vertex()
        b, _ = self.build(g)
        alg = g0_algebra(g)
        assert theta(b, IdealG0(alg, frozenset()), 1) == frozenset()
        assert theta(b, IdealG0(alg, frozenset({1, 2})), 1) == \
            frozenset({GraphVertex(1), GraphVertex(2)})

    def test_correspondence_report(self):
        rep = verify_ideal_correspondence(two_vertex())
        assert rep.ok and rep.surjective
        assert "PASS" in rep.render()

    def test_range_xset_equivalence_on_truncation(self):
        b = make_builder(example_fig1(), 64)
        # multiples of 3 form a hereditary-looking top set for edge 1
        assert check_range_xset_equivalence(
            b, UPSet.naturals(), word_depth=5, edge_horizon=5) == []


class TestQuotient:
    def test_trivial_quotient_is_identity(self):
        g = two_vertex()
        b = GraphBuilder(g)
        built = b.build_e(1, 2, 1)
        assert quotient_graph(built, frozenset()) == built

    def test_full_quotient_is_empty(self):
        g = two_vertex()
        b = GraphBuilder(g)
        built = b.build_e(1, 2, 1)
        th = theta(b, IdealG0(g0_algebra(g), frozenset({1, 2})), 1)
        q = quotient_graph(built, th)
        assert q.vertices == [] and q.edges == []

    def test_non_hereditary_deletion_rejected(self):
        g = two_vertex()
        built = GraphBuilder(g).build_e(1, 2, 1)
        # deleting v1 leaves the edge into v2 emitted from inside the
        # deleted set
        with pytest.raises(ValueError):
            quotient_graph(built, frozenset({GraphVertex(1)}))

    def test_unknown_vertex_rejected(self):
        g = two_vertex()
        built = GraphBuilder(g).build_e(1, 2, 1)
        with pytest.raises(ValueError):
            quotient_graph(built, frozenset({GraphVertex(9)}))


class TestMatrixFrontEnd:
    def test_identity_matrix_two_loops(self):
        g = matrix_to_ultragraph([[1, 0], [0, 1]])
        assert g.erange(1).members() == [1]
        assert g.erange(2).members() == [2]

    def test_full_matrix(self):
        g = matrix_to_ultragraph([[1] * 3] * 3)
        for n in (1, 2, 3):
            assert g.erange(n).members() == [1, 2, 3]
            assert g.source(n) == n

    def test_zero_row(self):
        with pytest.raises(ZeroRow):
            matrix_to_ultragraph([[0, 0], [1, 1]])

    def test_non_square(self):
        with pytest.raises(ValueError):
            matrix_to_ultragraph([[1, 0]])

    def test_dense_text(self):
        g = parse_matrix_file("1 0\n0 1\n")
        assert g.universe_size == 2

    def test_schematic_reproduces_divisibility_rows(self):
        g = parse_matrix_file("row 2*i-1: (i+2) | m\n"
                              "row 2*i: m <= i^2 and not (4 | m)\n")
        ex = example_fig1()
        for n in range(1, 20):
            assert g.erange(n) == ex.erange(n)
            assert g.source(n) == n

    def test_schematic_zero_row(self):
        with pytest.raises(ZeroRow):
            parse_matrix_file("row 1: m == 0\n"
                              "row i+1: 2 | m\n")

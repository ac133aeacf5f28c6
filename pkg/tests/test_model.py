"""Unit tests for words, ultragraph interfaces, and the graph container."""

import pytest

from ultragraph.model import (AllZeroWord, BarEdge, BinaryWord, BuiltGraph,
                              EpsEdge, FiniteUltragraph, GraphVertex,
                              InvalidIndexSets, TildeEdge, TildeVertex,
                              UncoveredIndex, WordVertex, edge_sort_key,
                              g0_rg_membership, r_lambda_mu, r_omega,
                              vertex_sort_key)
from ultragraph.upset import UPSet


class TestBinaryWord:
    def test_one_based_indexing(self):
        w = BinaryWord.from_string("101")
        assert (w[1], w[2], w[3]) == (1, 0, 1)
        assert len(w) == 3 and str(w) == "101"

    def test_zeros_one(self):
        assert str(BinaryWord.zeros_one(2)) == "001"

    def test_restrict_and_child(self):
        w = BinaryWord.from_string("101")
        assert str(w.restrict(2)) == "10"
        assert str(w.child(1)) == "1011"

    def test_first_one_and_prefix(self):
        w = BinaryWord.from_string("001")
        assert w.first_one() == 3
        assert w.is_prefix_of(BinaryWord.from_string("0010"))
        assert not w.is_prefix_of(BinaryWord.from_string("000"))


class TestRangeSets:
    def graph(self):
        return FiniteUltragraph(4, [(1, {1, 2}), (1, {2, 3}), (2, {4})])

    def test_r_lambda_mu(self):
        g = self.graph()
        assert r_lambda_mu(g, {1, 2}, set()).members() == [2]
        assert r_lambda_mu(g, {1}, {2}).members() == [1]

    def test_invalid_index_sets(self):
        g = self.graph()
        with pytest.raises(InvalidIndexSets):
            r_lambda_mu(g, set(), {1})
        with pytest.raises(InvalidIndexSets):
            r_lambda_mu(g, {1}, {1})

    def test_r_omega(self):
        g = self.graph()
        assert r_omega(g, BinaryWord.from_string("110")).members() == [2]
        with pytest.raises(AllZeroWord):
            r_omega(g, BinaryWord.from_string("000"))

    def test_regularity(self):
        g = self.graph()
        assert g0_rg_membership(g, 1) and g0_rg_membership(g, 2)
        assert not g0_rg_membership(g, 3)


class TestFiniteUltragraph:
    def test_validation(self):
        with pytest.raises(ValueError):
            FiniteUltragraph(2, [(3, {1})])       # source outside
        with pytest.raises(ValueError):
            FiniteUltragraph(2, [(1, {3})])       # range outside
        with pytest.raises(ValueError):
            FiniteUltragraph(2, [(1, set())])     # empty range
        with pytest.raises(ValueError):
            FiniteUltragraph(2, [(1, UPSet.multiples(2))])  # infinite range

    def test_accessors(self):
        g = FiniteUltragraph(3, [(2, {1, 3})])
        assert g.source(1) == 2
        assert g.erange(1).members() == [1, 3]
        assert g.out_edges(2) == [1] and g.out_edges(1) == []
        with pytest.raises(UncoveredIndex):
            g.source(2)


def tiny_graph():
    v1, v2 = GraphVertex(1), GraphVertex(2)
    e = EpsEdge(1, v2)
    return BuiltGraph(vertices=[v1, v2], edges=[e], source={e: v1},
                      target={e: v2}, word_depth=1, vertex_horizon=2,
                      edge_horizon=1)


class TestBuiltGraph:
    def test_adjacency(self):
        g = tiny_graph()
        v1, v2 = g.vertices
        assert g.out_edges(v1) == g.in_edges(v2) == g.edges
        assert g.has_vertex(v1) and not g.has_vertex(GraphVertex(3))
        assert not g.is_frontier(v1)

    def test_dangling_edge_rejected(self):
        v1 = GraphVertex(1)
        e = EpsEdge(1, GraphVertex(9))
        with pytest.raises(ValueError):
            BuiltGraph(vertices=[v1], edges=[e], source={e: v1},
                       target={e: GraphVertex(9)}, word_depth=1,
                       vertex_horizon=1, edge_horizon=1)

    def test_json_is_deterministic(self):
        assert tiny_graph().to_json() == tiny_graph().to_json()

    def test_dot_marks_tree_edges(self):
        w = WordVertex(BinaryWord.from_string("1"))
        v = GraphVertex(1)
        e = BarEdge(v)
        g = BuiltGraph(vertices=[v, w], edges=[e], source={e: w},
                       target={e: v}, word_depth=1, vertex_horizon=1,
                       edge_horizon=1)
        assert "arrowhead=vee" in g.to_dot()


class TestOrdering:
    def test_vertex_sort(self):
        vs = [WordVertex(BinaryWord.from_string("01")), GraphVertex(2),
              TildeVertex(GraphVertex(1)), GraphVertex(1),
              WordVertex(BinaryWord.from_string("1"))]
        assert [repr(x) for x in sorted(vs, key=vertex_sort_key)] == \
            ["v1", "v2", "1", "01", "~v1"]

    def test_edge_sort(self):
        es = [EpsEdge(2, GraphVertex(1)), BarEdge(GraphVertex(3)),
              TildeEdge(BarEdge(GraphVertex(3))), EpsEdge(1, GraphVertex(5))]
        assert [repr(e) for e in sorted(es, key=edge_sort_key)] == \
            ["bar(v3)", "eps(1,v5)", "eps(2,v1)", "~bar(v3)"]

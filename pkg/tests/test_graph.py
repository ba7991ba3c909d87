import random
from itertools import combinations, permutations

import networkx as nx
import pytest
from hypothesis import given, settings

from rigidbound.graph import (
    Graph, are_isomorphic, canonical_form, canonical_graph, canonical_labeling, degree_sequence,
    from_graph6, graph_from_code, induced_subgraph, is_connected, is_k_connected, min_degree,
    read_graph6, relabel, to_graph6, write_graph6,
)

from conftest import graph_and_perm, graphs

TRIANGLE = Graph.from_edges(3, [(0, 1), (1, 2), (0, 2)])
PATH3 = Graph.from_edges(3, [(0, 1), (1, 2)])


def to_nx(g):
    h = nx.Graph()
    h.add_nodes_from(range(g.n))
    h.add_edges_from(g.edges())
    return h


def brute_isomorphic(g, h):
    if g.n != h.n or g.edge_count != h.edge_count:
        return False
    eh = set(h.edges())
    return any(all(tuple(sorted((p[u], p[v]))) in eh for u, v in g.edges())
               for p in permutations(range(g.n)))


class TestGraphType:
    def test_rejects_asymmetric_rows(self):
        with pytest.raises(ValueError, match="symmetric"):
            Graph(2, (0b10, 0))

    def test_rejects_self_loop(self):
        with pytest.raises(ValueError):
            Graph.from_edges(3, [(1, 1)])
        with pytest.raises(ValueError):
            Graph(1, (1,))

    def test_rejects_too_many_vertices(self):
        with pytest.raises(ValueError):
            Graph(17, (0,) * 17)

    def test_edges_are_lexicographic(self):
        g = Graph.from_edges(4, [(3, 2), (1, 0), (2, 0)])
        assert g.edges() == [(0, 1), (0, 2), (2, 3)]
        assert g.edge_count == 3
        assert (1, 2) in g.non_edges()

    def test_with_edges_and_vertices(self):
        g = TRIANGLE.with_edges(remove=[(0, 1)])
        assert not g.has_edge(0, 1) and g.edge_count == 2
        h = TRIANGLE.add_vertex([0, 2])
        assert h.n == 4 and h.neighbors(3) == [0, 2]
        assert h.remove_vertex(3) == TRIANGLE

    def test_hashable(self):
        assert len({TRIANGLE, Graph.from_edges(3, [(2, 1), (1, 0), (0, 2)])}) == 1


class TestRelabel:
    def test_identity(self):
        g = Graph.from_edges(5, [(0, 1), (1, 2), (3, 4)])
        assert relabel(g, range(5)) == g

    def test_triangle_stays_triangle(self):
        for p in permutations(range(3)):
            assert relabel(TRIANGLE, p) == TRIANGLE

    @pytest.mark.parametrize("perm", [[0, 0, 1], [0, 1], [0, 1, 3]])
    def test_rejects_non_bijection(self, perm):
        with pytest.raises(ValueError):
            relabel(TRIANGLE, perm)

    @settings(max_examples=200)
    @given(graph_and_perm())
    def test_edge_images(self, gp):
        g, p = gp
        h = relabel(g, p)
        assert set(h.edges()) == {tuple(sorted((p[u], p[v]))) for u, v in g.edges()}


class TestCanonicalForm:
    def test_triangle_relabelings_agree(self):
        assert canonical_form(TRIANGLE) == canonical_form(relabel(TRIANGLE, [2, 0, 1]))

    def test_triangle_vs_path(self):
        assert canonical_form(TRIANGLE) != canonical_form(PATH3)

    def test_code_layout(self):
        # n byte, then the upper triangle row-major, MSB first, zero padded
        assert canonical_form(TRIANGLE) == bytes([3, 0b11100000])
        assert len(canonical_form(Graph.complete(8))) == 1 + 4

    def test_code_round_trip(self):
        g = Graph.from_edges(6, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0), (0, 3)])
        assert canonical_form(graph_from_code(canonical_form(g))) == canonical_form(g)
        assert are_isomorphic(graph_from_code(canonical_form(g)), g)

    def test_labeling_is_permutation(self):
        g = Graph.from_edges(6, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5)])
        lab = canonical_labeling(g)
        assert sorted(lab) == list(range(6))
        assert relabel(g, lab) == canonical_graph(g)

    @settings(max_examples=500)
    @given(graphs(max_n=9))
    def test_orbit_invariance(self, g):
        rng = random.Random(repr(g.adj))
        code = canonical_form(g)
        for _ in range(10):
            p = list(range(g.n))
            rng.shuffle(p)
            assert canonical_form(relabel(g, p)) == code

    def test_completeness_against_brute_force(self):
        rng = random.Random(11)
        agree = same = 0
        for _ in range(200):
            n = rng.randint(3, 7)
            pairs = list(combinations(range(n), 2))
            m = rng.randint(0, len(pairs))
            g = Graph.from_edges(n, rng.sample(pairs, m))
            if rng.random() < 0.5:
                p = list(range(n))
                rng.shuffle(p)
                h = relabel(g, p)
                h = h.with_edges(remove=[h.edges()[0]], add=[h.non_edges()[0]]) if m and rng.random() < 0.3 and h.non_edges() else h
            else:
                h = Graph.from_edges(n, rng.sample(pairs, m))
            truth = brute_isomorphic(g, h)
            same += truth
            agree += (canonical_form(g) == canonical_form(h)) == truth
        assert agree == 200
        assert same > 50

    def test_regular_graphs_distinguished(self):
        # colour refinement alone cannot split these; individualization must
        prism = Graph.from_edges(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (0, 3), (1, 4), (2, 5)])
        k33 = Graph.from_edges(6, [(a, b) for a in range(3) for b in range(3, 6)])
        assert canonical_form(prism) != canonical_form(k33)
        assert nx.is_isomorphic(to_nx(prism), to_nx(k33)) is False


class TestStructure:
    def test_induced_subgraph_examples(self):
        g = Graph.from_edges(4, [(0, 1), (1, 2), (2, 3), (0, 3)])
        assert induced_subgraph(g, range(4)) == g
        assert induced_subgraph(TRIANGLE, [0, 2]).edges() == [(0, 1)]
        for s in combinations(range(4), 3):
            assert induced_subgraph(Graph.complete(4), s) == TRIANGLE
        with pytest.raises(ValueError):
            induced_subgraph(g, [])

    @settings(max_examples=100)
    @given(graphs(min_n=3))
    def test_induced_subgraph_composes(self, g):
        rng = random.Random(repr(g.adj))
        S = sorted(rng.sample(range(g.n), rng.randint(1, g.n)))
        T = sorted(rng.sample(range(len(S)), rng.randint(1, len(S))))
        assert induced_subgraph(induced_subgraph(g, S), T) == induced_subgraph(g, [S[t] for t in T])

    def test_degrees(self):
        assert degree_sequence(TRIANGLE) == [2, 2, 2]
        k4e = Graph.complete(4).with_edges(remove=[(0, 1)])
        assert degree_sequence(k4e) == [2, 2, 3, 3]
        assert min_degree(k4e) == 2

    def test_connectivity_examples(self):
        assert is_k_connected(TRIANGLE, 2)
        star = Graph.from_edges(4, [(0, 1), (0, 2), (0, 3)])
        assert is_connected(star) and not is_k_connected(star, 2)
        assert is_k_connected(Graph.complete(5), 4)
        with pytest.raises(ValueError):
            is_k_connected(TRIANGLE, 3)

    @settings(max_examples=200)
    @given(graphs(min_n=2, max_n=8))
    def test_connectivity_matches_networkx(self, g):
        kappa = nx.node_connectivity(to_nx(g))
        for k in range(1, g.n):
            assert is_k_connected(g, k) == (kappa >= k)


class TestGraph6:
    def test_known_strings(self):
        assert to_graph6(TRIANGLE) == "Bw"
        assert to_graph6(Graph.complete(4)) == "C~"
        assert from_graph6(">>graph6<<Bw") == TRIANGLE

    @settings(max_examples=200)
    @given(graphs(max_n=16))
    def test_round_trip_and_networkx_agreement(self, g):
        s = to_graph6(g)
        assert from_graph6(s) == g
        assert s == nx.to_graph6_bytes(to_nx(g), header=False).decode().strip()

    @pytest.mark.parametrize("bad", ["", "B", "Bww", "B\x7f"])
    def test_malformed(self, bad):
        with pytest.raises(ValueError):
            from_graph6(bad)

    def test_files(self, tmp_path):
        gs = [TRIANGLE, PATH3, Graph.complete(6)]
        write_graph6(tmp_path / "x.g6", gs)
        assert read_graph6(tmp_path / "x.g6") == gs

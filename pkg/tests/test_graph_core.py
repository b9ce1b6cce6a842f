import math

import networkx as nx
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import graphs, rooted
from oracles import brute_aut, labeled_injections, nx_copies, to_nx
from threshold_lab import graphs as G
from threshold_lab.canon import aut_count, canonical_form, is_isomorphic, rooted_aut_count
from threshold_lab.counting import (count_copies, count_extensions, count_labeled_copies, packing_number,
                                    subgraph_census)
from threshold_lab.enumeration import graphs as all_graphs
from threshold_lab.errors import CensusTooLarge, MalformedGraph6
from threshold_lab.graph6 import parse_any, parse_graph6, parse_sparse6, write_graph6, write_sparse6
from threshold_lab.graphs import Graph, RootedGraph


# graph invariants ------------------------------------------------------------------------


def test_graph_rejects_loops_and_out_of_range():
    with pytest.raises(ValueError):
        Graph(3, [(1, 1)])
    with pytest.raises(ValueError):
        Graph(3, [(0, 3)])


def test_graph_collapses_multi_edges():
    assert Graph(3, [(0, 1), (1, 0), (0, 1)]).e == 1


def test_rooted_graph_drops_root_root_edges():
    r = RootedGraph(G.complete(3), (0, 1))
    assert sorted(r.graph.edges) == [(0, 2), (1, 2)]
    assert r.v == 1 and r.e == 2
    with pytest.raises(ValueError):
        RootedGraph(G.complete(3), (0, 0))


# canonical form --------------------------------------------------------------------------


def test_canonical_form_examples():
    tri_a = Graph(3, [(0, 1), (1, 2), (0, 2)])
    tri_b = Graph(3, [(2, 0), (0, 1), (1, 2)])
    assert canonical_form(tri_a) == canonical_form(tri_b)
    assert canonical_form(G.complete(3)) != canonical_form(G.path(3))
    edge = Graph(3, [(0, 1)])
    assert canonical_form(RootedGraph(edge, (0,))) != canonical_form(RootedGraph(edge, (2,)))


def test_root_order_is_part_of_the_class():
    p = G.path(3)  # 0-1-2
    assert canonical_form(RootedGraph(p, (0, 1))) != canonical_form(RootedGraph(p, (1, 0)))
    assert canonical_form(RootedGraph(p, (0, 2))) == canonical_form(RootedGraph(p, (2, 0)))


@given(graphs(max_n=7), st.randoms(use_true_random=False))
def test_canonical_form_is_invariant_under_relabelling(g, rnd):
    perm = list(range(g.n))
    rnd.shuffle(perm)
    assert canonical_form(g) == canonical_form(g.relabel(perm))


@given(graphs(max_n=6), graphs(max_n=6))
def test_canonical_form_agrees_with_networkx(a, b):
    assert is_isomorphic(a, b) == nx.is_isomorphic(to_nx(a), to_nx(b))


@pytest.mark.slow
def test_canonical_form_complete_on_eight_vertices():
    # classes of graphs on k vertices (known enumeration); every class gets exactly one code
    assert [len(all_graphs(k)) for k in range(1, 9)] == [1, 2, 4, 11, 34, 156, 1044, 12346]


def test_labelled_graph_totals():
    # sum of k!/aut over classes counts labelled graphs, 2^C(k,2)
    for k in range(1, 7):
        assert sum(math.factorial(k) // aut_count(g) for g in all_graphs(k)) == 2 ** math.comb(k, 2)


def test_aut_examples():
    assert aut_count(G.complete(3)) == 6
    assert aut_count(G.path(3)) == 2
    assert aut_count(G.matching(2)) == 8
    assert rooted_aut_count(RootedGraph(G.star(3), (0,))) == 6
    assert rooted_aut_count(RootedGraph(G.complete(3), (0,))) == 2
    assert rooted_aut_count(RootedGraph(G.complete(3), (0, 1, 2))) == 1


@given(graphs(max_n=7))
def test_aut_matches_permutation_oracle(g):
    assert aut_count(g) == brute_aut(g)


@given(rooted(max_z=6))
def test_rooted_aut_matches_permutation_oracle(r):
    assert rooted_aut_count(r) == brute_aut(r.graph, fixed=r.roots)


# counting ------------------------------------------------------------------------------


def test_count_copies_examples():
    assert count_copies(G.complete(4), G.complete(3)) == 4
    assert count_copies(G.cycle(5), G.path(3)) == 5
    assert count_copies(G.petersen(), G.cycle(5)) == 12


@given(graphs(max_n=6), graphs(min_n=1, max_n=4))
def test_count_copies_matches_networkx(g, f):
    f = f.without_isolated() if f.e else f
    assert count_copies(g, f) == nx_copies(g, f)
    assert count_labeled_copies(g, f) == count_copies(g, f) * aut_count(f)


def test_extension_examples():
    edge_at_end = RootedGraph(G.path(2), (0,))
    c = count_extensions(edge_at_end, G.star(3), (0,))
    assert (c.labeled, c.unlabeled) == (3, 3)
    c = count_extensions(RootedGraph(G.path(3), (0,)), G.path(3), (0,))
    assert c.labeled == 1
    cherry = RootedGraph(Graph(3, [(0, 1), (0, 2)]), (0,))
    c = count_extensions(cherry, G.complete(4), (2,))
    assert (c.labeled, c.unlabeled) == (6, 3)


@given(rooted(max_z=4), graphs(min_n=1, max_n=6), st.randoms(use_true_random=False))
def test_extensions_match_injection_oracle(r, g, rnd):
    if r.s > g.n:
        return
    u = rnd.sample(range(g.n), r.s)
    c = count_extensions(r, g, u)
    assert c.labeled == labeled_injections(r.graph, g, dict(zip(r.roots, u)))
    assert c.labeled == c.unlabeled * rooted_aut_count(r)


def test_census_examples():
    tri = {(x.v, x.e): x.copies for x in subgraph_census(G.complete(3))}
    assert tri == {(2, 1): 3, (3, 2): 3, (3, 3): 1}
    k4 = subgraph_census(G.complete(4))
    assert k4.get(G.path(3)).copies == 12
    assert [(x.v, x.e, x.copies) for x in subgraph_census(G.path(2))] == [(2, 1, 1)]
    with pytest.raises(CensusTooLarge):
        subgraph_census(G.complete(7), max_edges=20)


@given(graphs(max_n=6, max_edges=8))
def test_census_against_labelled_enumeration(h):
    # every isolate-free class I: N(h,I) copies, and sum of labelled copies per edge count
    cen = subgraph_census(h)
    for x in cen:
        assert x.copies >= 1 and not x.graph.isolated()
        assert x.copies == nx_copies(h, x.graph) if x.graph.e == x.graph.n - 1 or x.e <= 3 else True
    for m in range(1, h.e + 1):
        lhs = sum(x.copies * x.aut for x in cen if x.e == m)
        rhs = sum(labeled_injections(x.graph, h) for x in cen if x.e == m)
        assert lhs == rhs
    if h.e:
        assert sum(x.copies for x in cen if x.e == h.e) == 1


def test_packing_examples():
    assert packing_number(G.cycle(6), G.path(2)) == 3
    assert packing_number(G.complete(4), G.complete(3)) == 1


# graph6 ------------------------------------------------------------------------------------


def test_graph6_known_strings():
    assert parse_graph6("B_") == Graph(3, [(0, 1)])
    assert parse_graph6("Bw") == G.complete(3)
    assert parse_graph6("?") == Graph(0)
    assert write_graph6(G.petersen()) == nx.to_graph6_bytes(to_nx(G.petersen()), header=False).decode().strip()


@given(graphs(max_n=12))
def test_graph6_round_trip_and_networkx(g):
    s = write_graph6(g)
    assert parse_graph6(s) == g
    assert write_graph6(parse_graph6(s)) == s
    assert s == nx.to_graph6_bytes(to_nx(g), header=False).decode().strip()
    assert parse_sparse6(write_sparse6(g)) == g
    assert parse_any(write_sparse6(g)) == g


def test_graph6_large_vertex_count():
    g = Graph(100, [(0, 99), (5, 6)])
    assert parse_graph6(write_graph6(g)) == g
    assert parse_sparse6(write_sparse6(g)) == g


@given(graphs(min_n=1, max_n=10))
def test_sparse6_matches_networkx(g):
    ours = write_sparse6(g)
    theirs = nx.to_sparse6_bytes(to_nx(g), header=False).decode().strip()
    assert parse_sparse6(theirs) == g
    assert nx.from_sparse6_bytes(ours.encode()).number_of_edges() == g.e
    if g.n & (g.n - 1):  # the two writers pick different padding when n is a power of two
        assert ours == theirs


def test_malformed_graph6_reports_offset():
    with pytest.raises(MalformedGraph6) as err:
        parse_graph6("Dh")  # five vertices need two data bytes
    assert err.value.offset == 2
    with pytest.raises(MalformedGraph6) as err:
        parse_graph6("B!")
    assert err.value.offset == 1

import math
from itertools import combinations

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from conftest import graphs, rooted
from oracles import brute_forests, brute_max_sunflower
from threshold_lab import graphs as G
from threshold_lab.canon import canonical_form
from threshold_lab.counting import copies_on
from threshold_lab.errors import BudgetExceeded, DomainError, PreconditionUnmet
from threshold_lab.graphs import Graph, RootedGraph
from threshold_lab.structure import (extract_components, forest_count, forest_count_brute, generate_wz_trees,
                                     is_sunflower, max_sunflower)


# sunflowers ----------------------------------------------------------------------------------


def test_sunflower_examples():
    assert max_sunflower(RootedGraph(G.star(5), (0,)))[0] == 5
    assert max_sunflower(RootedGraph(G.complete(3), ()))[0] == 1
    assert max_sunflower(RootedGraph(G.matching(2), ()))[0] == 2
    assert max_sunflower(RootedGraph(G.petersen(), ()))[0] == 1
    k, sf = max_sunflower(RootedGraph(G.path(2), (0,)))
    assert k == 1 and sf.mode == "exact"
    assert max_sunflower(RootedGraph(G.complete(2), (0, 1)))[0] == 0


@given(rooted(max_z=6, min_nonroots=1))
def test_max_sunflower_matches_assignment_oracle(r):
    k, sf = max_sunflower(r)
    assert k == brute_max_sunflower(r)
    assert is_sunflower(r, sf.petals)


@given(rooted(max_z=7, min_nonroots=1))
def test_sunflower_witness_is_valid(r):
    k, sf = max_sunflower(r)
    assert k == len(sf.petals) >= 1
    used = [v for p in sf.petals for v in p]
    assert len(used) == len(set(used)) and set(used) <= set(r.nonroots)
    for a, b in combinations(sf.petals, 2):
        assert not any(r.graph.has_edge(x, y) for x in a for y in b)


def test_sunflower_heuristic_beyond_cap():
    r = RootedGraph(G.star(14), (0,))
    k, sf = max_sunflower(r, cap=12)
    assert sf.mode == "heuristic" and k == 14


def test_is_sunflower_rejects_bad_systems():
    r = RootedGraph(G.path(3), (0,))  # w - a - b
    assert not is_sunflower(r, [(1,), (2,)])  # petals adjacent
    assert not is_sunflower(r, [(1,), (1, 2)])  # overlap
    star = RootedGraph(Graph(4, [(0, 1), (0, 2), (2, 3)]), (0,))
    assert not is_sunflower(star, [(1,), (2, 3)])  # not isomorphic over the core


# [W,Z]-trees -------------------------------------------------------------------------------------


def test_single_copy_tree():
    r = RootedGraph(G.path(3), (0,))
    trees = list(generate_wz_trees(r, max_copies=1))
    assert len(trees) == 1 and trees[0].e_t == 2 and trees[0].v_t == 2
    assert trees[0].steps() == []


def test_path_trees_two_and_three_copies():
    r = RootedGraph(G.path(3), (0,))  # w - a - b
    two = [t for t in generate_wz_trees(r, max_copies=2) if len(t.copies) == 2]
    shapes = sorted((t.graph.n, t.graph.e) for t in two)
    assert shapes == [(3, 3), (4, 3)]  # triangle w a b, and the fork w - a < b, b'
    upto_three = list(generate_wz_trees(r, max_copies=3))
    assert len(upto_three) == 5
    three = sorted((t.graph.n, t.graph.e) for t in upto_three if len(t.copies) == 3)
    assert three == [(4, 4), (5, 4)]  # triangle with a pendant, and the three-leaf fork


@given(rooted(max_z=4, min_nonroots=1), st.integers(1, 3))
def test_trees_are_valid_and_distinct(r, copies):
    assume(r.v >= 2 and r.e >= 1)
    seen = set()
    for t in generate_wz_trees(r, max_copies=copies):
        assert t.is_valid()
        assert len(t.copies) <= copies
        code = canonical_form(t.rooted)
        assert code == t.code and code not in seen
        seen.add(code)
        for yi, zi, v, e, a in t.steps():
            assert set(yi) < set(zi) or v == 0
            assert len(zi) == r.z and v == len(zi) - len(yi)


def test_tree_needs_an_edge():
    with pytest.raises(PreconditionUnmet):
        list(generate_wz_trees(RootedGraph(Graph(3), (0,))))


def test_tree_budget_carries_partial_output():
    r = RootedGraph(Graph(5, [(0, 1), (1, 2), (2, 3), (3, 4)]), (0,))
    with pytest.raises(BudgetExceeded) as err:
        list(generate_wz_trees(r, max_copies=3, host_budget=50))
    assert len(err.value.partial) >= 1


# components ----------------------------------------------------------------------------------------


def test_component_examples():
    edge = RootedGraph(G.path(2), (0,))
    comps = extract_components(G.star(5), edge, (0,))
    assert sorted(c.tau for c in comps) == [1] * 5
    cherry = RootedGraph(Graph(3, [(0, 2), (1, 2)]), (0, 1))
    comps = extract_components(G.complete(3), cherry, (0, 1))
    assert [c.tau for c in comps] == [1]
    assert extract_components(Graph(4), edge, (0,)) == []


@given(graphs(min_n=2, max_n=6, max_edges=12), rooted(max_z=4, min_nonroots=1), st.randoms(use_true_random=False))
def test_components_partition_copies(h, r, rnd):
    assume(r.s <= h.n and r.e >= 1)
    x = rnd.sample(range(h.n), r.s)
    comps = extract_components(h, r, x)
    all_copies = copies_on(r, h, x)
    assert sum(c.tau for c in comps) == len(all_copies)
    for a, b in combinations(comps, 2):
        assert not (a.edges & b.edges)
    # minimality: within a component the copies are linked through shared edges
    for c in comps:
        reached, frontier = {0}, [0]
        while frontier:
            i = frontier.pop()
            for j, other in enumerate(c.copies):
                if j not in reached and c.copies[i].edges & other.edges:
                    reached.add(j)
                    frontier.append(j)
        assert len(reached) == c.tau


# forests ---------------------------------------------------------------------------------------------


def test_forest_examples():
    assert forest_count(3, 1) == 3
    assert forest_count(2, 1) == 1
    assert forest_count(5, 2) == 50
    with pytest.raises(DomainError):
        forest_count(3, 0)
    with pytest.raises(DomainError):
        forest_count(2, 3)


def test_forest_formula_matches_enumeration():
    for t in range(1, 8):
        for m in range(1, t + 1):
            assert forest_count(t, m) == forest_count_brute(t, m)


@pytest.mark.parametrize("t,m", [(3, 1), (4, 2), (5, 2), (5, 3)])
def test_forest_count_spanning_tree_oracle(t, m):
    assert forest_count(t, m) == brute_forests(t, m)

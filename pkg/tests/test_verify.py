import math
from fractions import Fraction

import pytest

from threshold_lab import graphs as G
from threshold_lab.canon import rooted_aut_count
from threshold_lab.decomposition import is_leading, mu
from threshold_lab.enumeration import random_sparse_hosts
from threshold_lab.errors import DomainError, HypothesisUnmet
from threshold_lab.graphs import Graph, RootedGraph
from threshold_lab.numeric import Real
from threshold_lab.structure import generate_wz_trees
from threshold_lab.thresholds import p_expectation_threshold
from threshold_lab.verify import (Check, small_q_alpha_sweep, verify_aut_bounds, verify_chain_bound,
                                  verify_claim_nu, verify_component_aut_claim, verify_cycle_exclusion,
                                  verify_lemma_F_fixed, verify_lemma_F_gen, verify_lemma_tree_hard,
                                  verify_no_sunflower, verify_small_q_theorem)

PENDANT = RootedGraph(G.path(2), (0,))


def test_check_status_semantics():
    assert Check("x", {"h": True}, {"c": True}).status == "pass"
    assert Check("x", {"h": True}, {"c": False}).status == "fail"
    assert Check("x", {"h": False}, {"c": False}).status == "advisory"


# component and product lemmas ----------------------------------------------------------------


def test_F_fixed_pendant_edges():
    n = 64
    q = p_expectation_threshold(G.star(5), n, theta=1).p
    c = verify_lemma_F_fixed(G.star(5), PENDANT, (0,), n, q)
    assert c.status == "pass"
    assert c.values["nu"] == 5


def test_F_fixed_no_copies():
    c = verify_lemma_F_fixed(Graph(3, [(1, 2)]), PENDANT, (0,), 64, Fraction(1, 10))
    assert c.values["nu"] == 0 and c.conclusions["nu <= bound"]


def test_F_gen_single_vertex_attachments():
    n = 1024
    q = p_expectation_threshold(G.star(5), n, theta=1).p
    c = verify_lemma_F_gen(G.star(5), PENDANT, (0,), n, q)
    assert c.values["component_sizes"] == [1] * 5
    assert c.conclusions["max component <= bound"]
    assert c.status in ("pass", "advisory")


def test_tree_hard_one_copy_reduces_to_corollary():
    r = RootedGraph(G.path(3), (1,))  # cherry rooted at its centre
    n = 64
    rr = p_expectation_threshold(r.graph, n, theta=1).p * 2
    t0 = next(generate_wz_trees(r, max_copies=1))
    c = verify_lemma_tree_hard(r, None, n, rr, trees=[t0])
    assert c.status == "pass"
    m = mu(r, n, rr)
    assert m.mu_tilde.compare(m.mu * m.aut) == 0
    assert m.aut <= r.v ** r.e


def test_tree_hard_cherry_two_copies():
    r = RootedGraph(G.path(3), (1,))
    n = 64
    rr = p_expectation_threshold(r.graph, n, theta=1).p * 2
    assert is_leading(r, n, rr)[0]
    c = verify_lemma_tree_hard(r, None, n, rr, max_copies=2)
    assert c.hypotheses_hold and c.status == "pass"
    assert c.values["trees"] >= 2
    assert c.values["empirical_K"] is not None


def test_tree_hard_advisory_when_not_leading():
    r = RootedGraph(G.complete(3), ())
    c = verify_lemma_tree_hard(r, None, 10, Fraction(1, 2), max_copies=1)
    assert c.status == "advisory"
    with pytest.raises(HypothesisUnmet):
        verify_lemma_tree_hard(r, None, 10, Fraction(1, 2), max_copies=1, strict=True)


# sunflower and automorphism lemmas ------------------------------------------------------------


def test_no_sunflower_star_fails_hypotheses():
    n = 1024
    star = RootedGraph(G.star(12), (0,))
    rr = p_expectation_threshold(star.graph, n, theta=1).p * 2
    c = verify_no_sunflower(star, None, n, rr)
    assert c.values["k"] == 12
    assert not c.conclusions["k < log n"]
    assert c.status == "advisory"


def test_no_sunflower_single_vertex():
    c = verify_no_sunflower(PENDANT, None, 16, Fraction(1, 16))
    assert c.values["k"] == 1 and c.conclusions["k < log n"]


def test_aut_bounds_matching():
    for m in range(1, 4):
        r = RootedGraph(G.matching(m), ())
        c = verify_aut_bounds(r, None, 4)
        assert c.values["aut"] == math.factorial(m) * 2 ** m
        assert c.conclusions["aut <= v^e"]


def test_aut_bounds_star_and_trivial():
    for d in range(3, 7):  # k = d + 1 >= 4 log2(2)
        r = RootedGraph(G.star(d), (0,))
        c = verify_aut_bounds(r, d + 1, 2)
        assert c.values["aut"] == math.factorial(d)
        assert c.values["lemma_applies"] and c.conclusions["aut <= (16k)^e"]
    c = verify_aut_bounds(RootedGraph(G.complete(3), (0, 1, 2)), 8, 2)
    assert c.values["aut"] == 1 and c.conclusions["aut <= v^e"]


def test_component_claim_examples():
    assert verify_component_aut_claim(G.star(4)).status == "pass"
    assert verify_component_aut_claim(G.complete(4)).status == "pass"


# small q, cycles and the chain bound --------------------------------------------------------


def test_nu_matching():
    n = 100
    h = G.matching(5)
    q = p_expectation_threshold(h, n, theta=1).p
    c = verify_claim_nu(h, G.path(2), n, q)
    assert c.values["nu"] == 5 and c.status == "pass"


def test_nu_absent_tree():
    c = verify_claim_nu(G.matching(2), G.path(3), 100, Fraction(1, 10))
    assert c.values["nu"] == 0


def test_cycle_exclusion_values():
    c = verify_cycle_exclusion(100, Fraction(9, 1000))
    assert abs(c.values["expectations"][3] - 100 * 99 * 98 * 0.009 ** 3 / 6) < 1e-12
    assert c.status == "pass"
    z = verify_cycle_exclusion(100, 0)
    assert all(v == 0 for v in z.values["expectations"].values())
    with pytest.raises(DomainError):
        verify_cycle_exclusion(100, Fraction(1, 100))


def test_cycle_exclusion_random_hosts():
    hosts, _ = random_sparse_hosts(100, Fraction(9, 1000), 15, seed=5, max_vertices=7)
    c = verify_cycle_exclusion(100, Fraction(9, 1000), hosts=hosts)
    assert c.conclusions["sparse hosts acyclic"]
    assert all(not h.has_cycle() for h in hosts)


def test_chain_path_in_sparse_host():
    n = 1024
    h = G.path(4).disjoint_union(G.complete(3))
    q = p_expectation_threshold(h, n, theta=1).p
    c = verify_chain_bound(h, G.path(3), n, q)
    assert c.status == "pass"
    assert c.values["N"] == 5


def test_chain_absent_pattern_is_advisory():
    c = verify_chain_bound(G.path(4), G.complete(3), 1024, Fraction(1, 100))
    assert c.status == "advisory"


def test_small_q_forest_and_edge():
    n = 10_000
    alpha = Real.approx(math.exp(-2) / 2)
    c = verify_small_q_theorem(G.path(2), n, Fraction(1, 2), alpha)
    assert c.status == "pass"
    hosts, _ = random_sparse_hosts(n, alpha * Real.exact(Fraction(1, 2)) / n, 5, seed=2, forests=True)
    for h in hosts:
        assert verify_small_q_theorem(h, n, Fraction(1, 2), alpha).status == "pass"


def test_alpha_sweep_reports_first_failure():
    rows, first = small_q_alpha_sweep(G.path(2), 10_000, Fraction(1, 2), [0.01, 0.1, 0.2, 0.3])
    assert len(rows) == 4
    assert first is None or first in (0.01, 0.1, 0.2, 0.3)

"""One test per acceptance criterion; each records a PASS/FAIL line shown in the terminal summary.

Runtime limits are part of each criterion and are judged on this machine's wall clock.
"""

import math
import time
from fractions import Fraction

import pytest

from conftest import ACCEPTANCE_LINES
from oracles import threshold_oracle
from threshold_lab import graphs as G
from threshold_lab.counting import subgraph_census
from threshold_lab.decomposition import is_leading, leading_decomposition, mu
from threshold_lab.enumeration import connected_graphs, self_sparse_instances
from threshold_lab.graphs import RootedGraph
from threshold_lab.montecarlo import p_c_monte_carlo
from threshold_lab.numeric import Real
from threshold_lab.structure import forest_count, forest_count_brute
from threshold_lab import suites
from threshold_lab.thresholds import p_expectation_threshold, p_fractional_expectation_threshold

pytestmark = pytest.mark.acceptance


def record(name, ok, elapsed, limit, detail):
    in_time = elapsed < limit
    verdict = "PASS" if ok and in_time else "FAIL"
    ACCEPTANCE_LINES.append(f"{verdict}  {name}: {detail}; runtime {elapsed:.1f}s (limit {limit:.0f}s)")
    print(ACCEPTANCE_LINES[-1])
    assert ok, detail
    assert in_time, f"{name} took {elapsed:.1f}s, limit {limit}s"


def test_threshold_sandwich():
    t0 = time.perf_counter()
    n = 100
    family = connected_graphs(5)
    exact_ok = 0
    for h in family:
        cen = subgraph_census(h)
        pe = p_expectation_threshold(h, n, census=cen).p
        ps = p_fractional_expectation_threshold(h, n, census=cen).p
        exact_ok += pe.compare(ps) <= 0
    chosen = [G.path(2), G.path(3), G.complete(3), G.star(3), G.path(4)]
    mc_ok = 0
    rows = []
    for h in chosen:
        ps = p_fractional_expectation_threshold(h, n).p
        est = p_c_monte_carlo(h, n, samples=10_000, seed=2024, tolerance=0.1, raise_inconclusive=False)
        mc_ok += float(ps) <= est.hi
        rows.append(f"{float(ps):.4g}<={est.hi:.4g}")
    ok = exact_ok == len(family) and mc_ok == len(chosen)
    record("threshold sandwich", ok, time.perf_counter() - t0, 300,
           f"p_E<=p_E* on {exact_ok}/{len(family)} connected graphs (v<=5, n=100); "
           f"p_E*<=p_c upper CI on {mc_ok}/{len(chosen)} graphs [{', '.join(rows)}]")


def test_small_pe_values():
    t0 = time.perf_counter()
    k3 = float(p_expectation_threshold(G.complete(3), 10).p)
    p3 = float(p_expectation_threshold(G.path(3), 10).p)
    want_k3 = (3 / 720) ** (1 / 3)
    want_p3 = 720 ** -0.5
    rel = max(abs(k3 - want_k3) / want_k3, abs(p3 - want_p3) / want_p3)
    orc = max(abs(k3 - threshold_oracle(G.complete(3), 10)) / k3, abs(p3 - threshold_oracle(G.path(3), 10)) / p3)
    ok = rel <= 1e-9 and orc <= 1e-9
    record("p_E(K3), p_E(P3) at n=10", ok, time.perf_counter() - t0, 1,
           f"max relative error {rel:.2e} vs closed form, {orc:.2e} vs no-dedup oracle (tol 1e-9)")


def test_leading_decompositions():
    t0 = time.perf_counter()
    n = 1000
    good = 0
    inst = self_sparse_instances(n, 200, seed=77, max_vertices=9)
    for g, q in inst:
        dec = leading_decomposition(g, n, q)
        ok = dec.valid and dec.chain[0] == () and dec.chain[-1] == tuple(range(g.n))
        for before, after in zip(dec.chain, dec.chain[1:]):
            r, _ = RootedGraph.of(g.induced(list(after)), [after.index(x) for x in before], range(len(after)))
            ok = ok and (r.v == 1 or is_leading(r, n, dec.p)[0]) and mu(r, n, dec.p).mu.compare(1) >= 0
        good += ok
    record("leading decomposition validity", good == len(inst), time.perf_counter() - t0, 120,
           f"{good}/{len(inst)} chains p-leading with mu>=1 at every step (v<=9)")


def _suite(name, fn, limit, extra=""):
    t0 = time.perf_counter()
    rep = fn()
    elapsed = time.perf_counter() - t0
    detail = (f"{rep.instances} instances, {rep.passed} pass, {rep.failed} fail, {rep.advisories} advisory"
              + (f"; {extra(rep)}" if extra else ""))
    record(name, rep.failed == 0 and rep.passed > 0, elapsed, limit, detail)
    return rep


def test_small_claims():
    _suite("small-claims suite", suites.small_claims_suite, 600,
           lambda r: f"{r.summary['rooted_graphs']} rooted graphs, v(Z)<=6, n in {{16,64,1024}}")


def test_forest_count():
    t0 = time.perf_counter()
    pairs = [(t, m) for t in range(1, 8) for m in range(1, t + 1)]
    good = sum(forest_count(t, m) == forest_count_brute(t, m) for t, m in pairs)
    ok = good == len(pairs) and forest_count(3, 1) == 3 and forest_count(5, 2) == 50
    record("forest count", ok, time.perf_counter() - t0, 60, f"{good}/{len(pairs)} (t,m) pairs exact, t<=7")


def test_aut_bounds():
    _suite("automorphism bounds", suites.aut_bounds_suite, 900,
           lambda r: f"lemma instances {r.summary['lemma_instances']}, "
                     f"least c with aut<=(c k)^e: {r.summary['conjectured_least_c']:.3f}")


def test_tree_hard():
    _suite("tree-hard sweep", suites.tree_hard_suite, 900,
           lambda r: f"{r.summary['trees']} trees, empirical K = {r.summary['empirical_K']:.4f}")


def test_chain_bound():
    _suite("chain bound end-to-end", suites.chain_suite, 1200,
           lambda r: f"C={r.summary['C']}, n={r.summary['n']}, {r.instances} (host, F) checks")


def test_small_q():
    _suite("small-q theorem", suites.small_q_suite, 600,
           lambda r: f"alpha=e^-2/2, n={r.summary['n']}, q<1/(3n)")


def test_monte_carlo_calibration():
    t0 = time.perf_counter()
    exact = 1 - 2 ** (-1 / 190)
    a = p_c_monte_carlo(G.path(2), 20, samples=10_000, seed=5, tolerance=0.05)
    b = p_c_monte_carlo(G.path(2), 20, samples=10_000, seed=5, tolerance=0.05)
    width = (a.hi - a.lo) / exact
    same = (a.estimate, a.lo, a.hi) == (b.estimate, b.lo, b.hi)
    ok = a.lo <= exact <= a.hi and width < 0.10 and same
    record("Monte Carlo calibration", ok, time.perf_counter() - t0, 120,
           f"p_c(K2,n=20) in [{a.lo:.6f}, {a.hi:.6f}] vs {exact:.6f}, width {100 * width:.1f}%, "
           f"reproducible={same}")


def test_cycle_exclusion():
    _suite("cycle exclusion", suites.cycles_suite, 60,
           lambda r: f"max over 3<=t<=50 of E_qX_C_t = {r.summary['max_expectation']:.4f}, "
                     f"{r.summary['sparse_hosts']}/{r.summary['hosts']} sampled hosts q-sparse")

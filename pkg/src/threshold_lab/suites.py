"""Verifier suites: instance generators plus aggregation into one report per suite."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations

import numpy as np

from .counting import contains
from .decomposition import check_small_claims, is_leading, leading_decomposition
from .enumeration import (connected_graphs, random_forest, random_sparse_hosts, rooted_graphs, trees)
from .errors import BudgetExceeded, PreconditionUnmet
from .graphs import Graph, RootedGraph
from .numeric import Real
from .structure import forest_count, forest_count_brute
from .thresholds import is_q_sparse, p_expectation_threshold
from .verify import (CHAIN_C, Check, verify_aut_bounds, verify_chain_bound, verify_claim_nu,
                     verify_component_aut_claim, verify_cycle_exclusion, verify_lemma_F_fixed,
                     verify_lemma_F_gen, verify_lemma_tree_hard, verify_no_sunflower, verify_small_q_theorem)

SUITES = ("small-claims", "F-fixed", "F-gen", "tree-hard", "no-sunflower", "aut-bounds", "nu", "cycles",
          "chain", "small-q", "forest-count")
MAX_WITNESSES = 20


@dataclass
class SuiteReport:
    suite: str
    instances: int = 0
    passed: int = 0
    failed: int = 0
    advisories: int = 0
    witnesses: list = field(default_factory=list)
    summary: dict = field(default_factory=dict)

    def add(self, check: Check, label=None):
        self.instances += 1
        st = check.status
        if st == "pass":
            self.passed += 1
        elif st == "fail":
            self.failed += 1
            if len(self.witnesses) < MAX_WITNESSES:
                out = check.to_json()
                if label is not None:
                    out["instance"] = label
                self.witnesses.append(out)
        else:
            self.advisories += 1

    @property
    def ok(self) -> bool:
        return self.failed == 0

    def to_json(self):
        return {"suite": self.suite, "instances": self.instances, "passed": self.passed, "failed": self.failed,
                "advisories": self.advisories, "witnesses": self.witnesses, "summary": self.summary}


def _check_budget(rep, budget, total):
    if budget is not None and total > budget:
        rep.summary.update(planned_instances=total, budget=budget)
        raise BudgetExceeded(f"suite {rep.suite} has {total} instances, budget is {budget}", rep)


def _rooted_label(r: RootedGraph):
    return {"n": r.graph.n, "edges": sorted(r.graph.edges), "roots": list(r.roots)}


# exhaustive suites ----------------------------------------------------------------------


def small_claims_suite(zmax=6, ns=(16, 64, 1024), budget=None):
    """Clauses (a)-(c) on every p-leading rooted graph with |Z| <= zmax over a p grid.

    The grid is p = 2^j / n for j = -1 .. log2 n, so it covers p < 1/n once and p >= 1/n up to 1.
    """
    rep = SuiteReport("small-claims")
    rs = rooted_graphs(zmax)
    grid = []
    for n in ns:
        top = int(math.log2(n))
        for jj in range(-1, top + 1):
            grid.append((n, Fraction(2) ** jj / n))
    _check_budget(rep, budget, len(rs) * len(grid))
    leading = 0
    for n, p in grid:
        for r in rs:
            if r.z > n or not is_leading(r, n, p)[0]:
                continue
            leading += 1
            res = check_small_claims(r, n, p)
            c = Check("small-claims", {"p-leading": True},
                      {cl.clause: cl.status != "fail" for cl in res.results},
                      {cl.clause: cl.detail for cl in res.results})
            rep.add(c, {"rooted": _rooted_label(r), "n": n, "p": str(p)})
    rep.summary.update(rooted_graphs=len(rs), grid=len(grid), leading_instances=leading)
    return rep


def aut_bounds_suite(zmax=6, ns=(2, 4), kmax=8, component_vertices=7, budget=None):
    rep = SuiteReport("aut-bounds")
    rs = rooted_graphs(zmax, isolated_nonroots=False)
    _check_budget(rep, budget, len(rs))
    least_c = 0.0
    lemma_checks = 0
    for r in rs:
        for n in ns:
            for k in range(math.ceil(4 * math.log2(n)), kmax + 1):
                c = verify_aut_bounds(r, k, n)
                lemma_checks += bool(c.values.get("lemma_applies"))
                least_c = max(least_c, c.values.get("least_c", 0.0))
                rep.add(c, {"rooted": _rooted_label(r), "k": k, "n": n})
    comp = 0
    for g in connected_graphs(component_vertices):
        c = verify_component_aut_claim(g)
        comp += 1
        rep.add(c, {"component": sorted(g.edges), "v": g.n})
    rep.summary.update(rooted_graphs=len(rs), lemma_instances=lemma_checks, component_graphs=comp,
                       conjectured_least_c=least_c)
    return rep


def eligible_rooted(zmax, n, vmin=2, vmax=5, rr_of=None):
    """Rooted graphs meeting the r-leading and (r/2)-sparse hypotheses at the least such r.

    Sparseness is monotone up in r and leading is monotone down, so the only
    candidate is r = 2 * (sparseness threshold of J).
    """
    out = []
    for r in rooted_graphs(zmax, isolated_nonroots=False):
        if not vmin <= r.v <= vmax or r.e < 1:
            continue
        rr = p_expectation_threshold(r.graph, n, theta=1).p * 2
        if rr.compare(1) > 0:
            continue
        if r.v == 1 or is_leading(r, n, rr)[0]:
            out.append((r, rr))
    return out


def tree_hard_suite(zmax=6, n=64, max_copies=3, budget=None, host_budget=2_000_000):
    rep = SuiteReport("tree-hard")
    inst = eligible_rooted(zmax, n)
    _check_budget(rep, budget, len(inst))
    k_emp = None
    trees_seen = 0
    for r, rr in inst:
        c = verify_lemma_tree_hard(r, None, n, rr, max_copies=max_copies, host_budget=host_budget)
        trees_seen += c.values["trees"]
        k = c.values["empirical_K"]
        if k is not None and (k_emp is None or k.compare(k_emp) > 0):
            k_emp = k
        rep.add(c, {"rooted": _rooted_label(r), "r": str(rr)})
    rep.summary.update(n=n, max_copies=max_copies, trees=trees_seen,
                       empirical_K=None if k_emp is None else float(k_emp))
    return rep


def no_sunflower_suite(zmax=6, n=1024, random_count=40, random_vertices=10, seed=0, budget=None):
    rep = SuiteReport("no-sunflower")
    inst = eligible_rooted(zmax, n, vmin=1, vmax=zmax)
    rng = np.random.default_rng(seed)
    extra = 0
    tries = 0
    while extra < random_count and tries < 200 * random_count:
        tries += 1
        z = int(rng.integers(4, random_vertices + 1))
        from .enumeration import random_graph
        g = random_graph(z, float(rng.uniform(0.2, 0.5)), rng)
        if g.e == 0 or g.e > 12:
            continue
        s = int(rng.integers(0, 3))
        w = [v for v in range(s) if not any(g.has_edge(v, u) for u in range(s) if u != v)]
        r = RootedGraph.of(g, w, range(z))[0]
        if r.v < 1 or r.isolated_nonroots():
            continue
        rr = p_expectation_threshold(r.graph, n, theta=1).p * 2
        if rr.compare(1) > 0 or not (r.v == 1 or is_leading(r, n, rr)[0]):
            continue
        inst.append((r, rr))
        extra += 1
    _check_budget(rep, budget, len(inst))
    kmax = 0
    for r, rr in inst:
        c = verify_no_sunflower(r, None, n, rr)
        kmax = max(kmax, c.values["k"])
        rep.add(c, {"rooted": _rooted_label(r), "r": str(rr)})
    rep.summary.update(n=n, largest_sunflower=kmax, random_instances=extra)
    return rep


def forest_count_suite(tmax=7, budget=None):
    rep = SuiteReport("forest-count")
    pairs = [(t, m) for t in range(1, tmax + 1) for m in range(1, t + 1)]
    _check_budget(rep, budget, len(pairs))
    for t, m in pairs:
        a, b = forest_count(t, m), forest_count_brute(t, m)
        rep.add(Check("forest-count", {}, {"formula == enumeration": a == b}, {"t": t, "m": m, "formula": a,
                                                                                "enumerated": b}))
    return rep


# randomized suites -------------------------------------------------------------------------


def _random_instance_hosts(n, q, count, seed, **kw):
    hosts, rejected = random_sparse_hosts(n, q, count, seed, **kw)
    return hosts, rejected


def f_fixed_suite(count=100, n=64, seed=0, budget=None):
    """Random q-sparse hosts with [B,A] read off the host itself and random root images."""
    rep = SuiteReport("F-fixed")
    _check_budget(rep, budget, count)
    rng = np.random.default_rng(seed)
    q = Fraction(1, 20)
    hosts, rejected = random_sparse_hosts(n, q, count, seed, max_vertices=8, max_edges=10)
    for h in hosts:
        z = int(rng.integers(2, min(h.n, 5) + 1))
        zs = sorted(rng.choice(h.n, size=z, replace=False).tolist())
        sub = h.induced(zs)
        s = int(rng.integers(0, z))
        r = RootedGraph.of(sub, list(range(s)), range(z))[0]
        x = rng.choice(h.n, size=s, replace=False).tolist()
        c = verify_lemma_F_fixed(h, r, x, n, q)
        rep.add(c, {"host": sorted(h.edges), "rooted": _rooted_label(r), "x": x})
    rep.summary.update(n=n, q=str(q), rejected_draws=rejected)
    return rep


def _chain_instances(count, n, seed, max_vertices=7, max_edges=9):
    """(h, q) pairs: random hosts made q-sparse by taking q as their own sparseness threshold."""
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        from .enumeration import random_graph
        v = int(rng.integers(3, max_vertices + 1))
        h = random_graph(v, float(rng.uniform(0.2, 0.6)), rng).without_isolated()
        if h.e == 0 or h.e > max_edges:
            continue
        q = p_expectation_threshold(h, n, theta=1).p
        out.append((h, q))
    return out


def f_gen_suite(count=30, n=1024, seed=0, budget=None):
    """Steps [B,A] of leading decompositions at q' of subgraphs f of random sparse hosts, every X."""
    rep = SuiteReport("F-gen")
    _check_budget(rep, budget, count)
    fs = connected_graphs(4)
    for h, q in _chain_instances(count, n, seed):
        qp = Real.exact(CHAIN_C) * q * int(math.log2(n))
        for f in fs:
            if not contains(h, f):
                continue
            dec = leading_decomposition(f, n, q, qp)
            for st in dec.steps:
                after = list(st.after)
                rg = RootedGraph.of(f.induced(after), [after.index(x) for x in st.before], range(len(after)))[0]
                if rg.e == 0:
                    continue
                ba = RootedGraph.ba(rg.graph, rg.attachment(), rg.nonroots)[0]
                for x in permutations(range(h.n), ba.s):
                    c = verify_lemma_F_gen(h, ba, list(x), n, q, qp)
                    rep.add(c, {"host": sorted(h.edges), "rooted": _rooted_label(ba), "x": list(x)})
    rep.summary.update(n=n)
    return rep


def chain_suite(count=50, n=1024, fmax=4, seed=0, budget=None):
    rep = SuiteReport("chain")
    _check_budget(rep, budget, count)
    fs = connected_graphs(fmax)
    for h, q in _chain_instances(count, n, seed):
        for f in fs:
            if f.n > h.n or not contains(h, f):
                continue
            c = verify_chain_bound(h, f, n, q)
            rep.add(c, {"host": sorted(h.edges), "f": sorted(f.edges), "q": q.to_json()})
    rep.summary.update(n=n, C=CHAIN_C)
    return rep


def nu_suite(count=40, n=1000, seed=0, budget=None):
    rep = SuiteReport("nu")
    _check_budget(rep, budget, count)
    q = Fraction(1, 1500)
    hosts, rejected = random_sparse_hosts(n, q, count, seed, max_vertices=12, max_edges=11, forests=True)
    ts = [t for k in range(2, 6) for t in trees(k)]
    for h in hosts:
        for t in ts:
            if t.n > h.n:
                continue
            c = verify_claim_nu(h, t, n, q)
            rep.add(c, {"host": sorted(h.edges), "tree": sorted(t.edges)})
    rep.summary.update(n=n, q=str(q), rejected_draws=rejected)
    return rep


def cycles_suite(n=100, q=Fraction(9, 1000), hosts=200, seed=0, budget=None):
    rep = SuiteReport("cycles")
    _check_budget(rep, budget, hosts)
    rng = np.random.default_rng(seed)
    from .enumeration import random_graph
    sample = []
    sparse = 0
    for _ in range(hosts):
        v = int(rng.integers(3, 9))
        if rng.random() < 0.5:
            g = random_graph(v, float(rng.uniform(0.2, 0.7)), rng)
        else:
            g = random_forest(v, rng, 1.0)
            extra = int(rng.integers(0, 3))
            es = set(g.edges)
            for _ in range(extra):
                a, b = sorted(rng.choice(v, size=2, replace=False).tolist())
                es.add((a, b))
            g = Graph(v, es)
        g = g.without_isolated()
        if g.e == 0 or g.e > 12:
            continue
        sample.append(g)
        sparse += is_q_sparse(g, n, q)[0]
    c = verify_cycle_exclusion(n, q, 50, sample)
    rep.add(c)
    rep.summary.update(n=n, q=str(q), hosts=len(sample), sparse_hosts=sparse,
                       max_expectation=max(c.values["expectations"].values()))
    return rep


def small_q_suite(count=100, n=10_000, beta=Fraction(1, 2), alpha=None, seed=0, budget=None):
    rep = SuiteReport("small-q")
    _check_budget(rep, budget, count)
    alpha = Real.approx(math.exp(-2) / 2) if alpha is None else Real.coerce(alpha)
    q = alpha * Real.exact(beta) / n
    hosts, rejected = random_sparse_hosts(n, q, count, seed, max_vertices=12, max_edges=10, forests=True)
    for h in hosts:
        c = verify_small_q_theorem(h, n, beta, alpha)
        rep.add(c, {"host": sorted(h.edges)})
    rep.summary.update(n=n, beta=str(beta), alpha=float(alpha), rejected_draws=rejected)
    return rep


def run_suite(name: str, budget=None, seed=0):
    table = {
        "small-claims": lambda: small_claims_suite(budget=budget),
        "F-fixed": lambda: f_fixed_suite(seed=seed, budget=budget),
        "F-gen": lambda: f_gen_suite(seed=seed, budget=budget),
        "tree-hard": lambda: tree_hard_suite(budget=budget),
        "no-sunflower": lambda: no_sunflower_suite(seed=seed, budget=budget),
        "aut-bounds": lambda: aut_bounds_suite(budget=budget),
        "nu": lambda: nu_suite(seed=seed, budget=budget),
        "cycles": lambda: cycles_suite(seed=seed, budget=budget),
        "chain": lambda: chain_suite(seed=seed, budget=budget),
        "small-q": lambda: small_q_suite(seed=seed, budget=budget),
        "forest-count": lambda: forest_count_suite(budget=budget),
    }
    if name not in table:
        raise ValueError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    return table[name]()

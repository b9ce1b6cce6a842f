"""mu arithmetic, p-leading rooted graphs and leading decompositions."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from .canon import rooted_aut_count
from .counting import count_copies, subgraph_census
from .errors import HostTooSmall, NotSparse, PreconditionUnmet, SearchBudgetExceeded
from .graphs import Graph, RootedGraph
from .numeric import E, Real, falling_factorial
from .thresholds import expected_count, is_q_sparse

DEFAULT_LEADING_CAP = 12
ONE = Real.exact(1)


@dataclass(frozen=True)
class MuValue:
    """mu~_p(W, Z) = n^v p^e and mu_p(W, Z) = mu~ / aut(W, Z)."""

    n: int
    p: Real
    v: int
    e: int
    aut: int
    mu_tilde: Real
    mu: Real


def _mu_tilde(n, p, v, e):
    return Real.exact(n) ** v * p ** e


def mu(r: RootedGraph, n: int, p) -> MuValue:
    if n < r.z:
        raise HostTooSmall(n, r.z)
    p = Real.coerce(p)
    mt = _mu_tilde(n, p, r.v, r.e)
    a = rooted_aut_count(r)
    return MuValue(n, p, r.v, r.e, a, mt, mt / a)


def mu_ba(j: Graph, b, a, n: int, p) -> MuValue:
    """mu_p(B, A) = mu_p(B, B ∪ A) inside ``j``."""
    return mu(RootedGraph.ba(j, b, a)[0], n, p)


def _edges_in(adj, mask):
    t = 0
    m = mask
    while m:
        low = m & -m
        t += (adj[low.bit_length() - 1] & mask).bit_count()
        m ^= low
    return t // 2


def _mask(vs):
    m = 0
    for v in vs:
        m |= 1 << v
    return m


def _mu_sub(g: Graph, y, z, n, p):
    """mu_p(Y, Z) inside ``g`` for vertex collections Y ⊆ Z; aut only computed when needed."""
    ym, zm = _mask(y), _mask(z)
    v = len(z) - len(y)
    e = _edges_in(g.adj, zm) - _edges_in(g.adj, ym)
    mt = _mu_tilde(n, p, v, e)
    return mt, e


def _mu_full(g: Graph, y, z, n, p):
    r, _ = RootedGraph.of(g, list(y), z)
    return mu(r, n, p)


def is_leading(r: RootedGraph, n: int, p, cap: int = DEFAULT_LEADING_CAP):
    """``(True, None)`` if mu_p(Y, Z) < 1 for every W ⊊ Y ⊊ Z, else ``(False, Y)``."""
    if r.v < 1:
        raise PreconditionUnmet("W ⊊ Z", "rooted graph has no non-root vertex")
    if r.v > cap:
        raise SearchBudgetExceeded(f"v(W,Z)={r.v} exceeds leading-check cap {cap}")
    if n < r.z:
        raise HostTooSmall(n, r.z)
    p = Real.coerce(p)
    g, roots, rest = r.graph, list(r.roots), list(r.nonroots)
    z = list(range(g.n))
    for size in range(len(rest) - 1, 0, -1):
        for extra in combinations(rest, size):
            y = roots + list(extra)
            mt, _ = _mu_sub(g, y, z, n, p)
            if mt.compare(ONE) < 0:
                continue
            if _mu_full(g, y, z, n, p).mu.compare(ONE) >= 0:
                return False, y
    return True, None


@dataclass
class LeadingStep:
    before: tuple
    after: tuple
    mu: MuValue
    leading: bool

    @property
    def added(self):
        return tuple(sorted(set(self.after) - set(self.before)))


@dataclass
class LeadingDecomposition:
    graph: Graph
    n: int
    p: Real
    chain: list = field(default_factory=list)
    steps: list = field(default_factory=list)

    @property
    def valid(self) -> bool:
        return all(s.leading and s.mu.mu.compare(ONE) >= 0 for s in self.steps)

    def to_json(self):
        return [
            {
                "vertices": list(s.after),
                "added": list(s.added),
                "mu_log2": s.mu.mu.log2,
                "mu": s.mu.mu.to_json(),
                "leading": s.leading,
            }
            for s in self.steps
        ]


def leading_decomposition(j: Graph, n: int, q, p=None, cap: int = DEFAULT_LEADING_CAP,
                          check_sparse: bool = True) -> LeadingDecomposition:
    """Greedy top-down chain ∅ = W_0 ⊊ ... ⊊ W_k = V(j).

    At each stage the largest Y ⊊ top with mu_p(Y, top) >= 1 is taken
    (lexicographically least among those of that size), then the search
    recurses into J[Y].
    """
    q = Real.coerce(q)
    p = q if p is None else Real.coerce(p)
    if p.compare(q) < 0:
        raise PreconditionUnmet("p >= q")
    if n < j.n:
        raise HostTooSmall(n, j.n)
    if j.n > cap:
        raise SearchBudgetExceeded(f"{j.n} vertices exceeds leading cap {cap}")
    if check_sparse:
        ok, witness = is_q_sparse(j, n, q)
        if not ok:
            raise NotSparse(witness)
    top = tuple(range(j.n))
    chain = [top]
    while top:
        chosen = None
        for size in range(len(top) - 1, -1, -1):
            for y in combinations(top, size):
                mt, _ = _mu_sub(j, y, top, n, p)
                if mt.compare(ONE) < 0:
                    continue
                if _mu_full(j, y, top, n, p).mu.compare(ONE) >= 0:
                    chosen = y
                    break
            if chosen is not None:
                break
        if chosen is None:
            # only reachable when J[top] fails mu_p(∅, top) >= 1, i.e. sparseness was skipped
            raise NotSparse(None)
        chain.append(chosen)
        top = chosen
    chain.reverse()
    dec = LeadingDecomposition(j, n, p, chain)
    for before, after in zip(chain, chain[1:]):
        r, _ = RootedGraph.of(j.induced(list(after)), [after.index(x) for x in before], range(len(after)))
        m = mu(r, n, p)
        lead = True if r.v == 1 else is_leading(r, n, p, cap)[0]
        dec.steps.append(LeadingStep(before, after, m, lead))
    return dec


# small claims ---------------------------------------------------------------


@dataclass
class ClaimResult:
    clause: str
    status: str  # "pass", "fail" or "n/a"
    detail: str = ""


@dataclass
class SmallClaimsReport:
    rooted: RootedGraph
    n: int
    p: Real
    mu: MuValue
    results: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.status != "fail" for r in self.results)

    def by_clause(self):
        return {r.clause: r for r in self.results}


def check_small_claims(r: RootedGraph, n: int, p, cap: int = DEFAULT_LEADING_CAP) -> SmallClaimsReport:
    p = Real.coerce(p)
    lead, witness = is_leading(r, n, p, cap)
    if not lead:
        raise PreconditionUnmet("p-leading", f"mu_p(Y,Z) >= 1 at Y={witness}")
    m = mu(r, n, p)
    rep = SmallClaimsReport(r, n, p, m)
    a_set = list(r.nonroots)
    b_set = r.attachment()
    na = len(a_set)
    # (a)
    c = m.mu.compare(n)
    if na >= 2:
        ok = c < 0
        rep.results.append(ClaimResult("a", "pass" if ok else "fail", f"mu={float(m.mu):.6g} vs n={n} (strict)"))
    else:
        rep.results.append(ClaimResult("a", "pass" if c <= 0 else "fail", f"mu={float(m.mu):.6g} vs n={n}"))
    big_p = p.compare(Fraction(1, n)) >= 0
    # (b)
    if not big_p:
        rep.results.append(ClaimResult("b", "n/a", "p < 1/n"))
    elif na == 1:
        rep.results.append(ClaimResult("b", "pass", "|A| = 1"))
    else:
        low = [v for v in a_set if r.graph.degree(v) < 2]
        rep.results.append(ClaimResult("b", "fail" if low else "pass",
                                       f"degree < 2 at {low}" if low else "all degrees >= 2"))
    # (c)
    if not big_p:
        rep.results.append(ClaimResult("c", "n/a", "p < 1/n"))
    elif na < 2:
        rep.results.append(ClaimResult("c", "n/a", "|A| < 2"))
    elif m.mu.compare(ONE) < 0:
        rep.results.append(ClaimResult("c", "n/a", "mu < 1"))
    else:
        e_ba = r.e
        first = e_ba >= max(na, len(b_set) + 1)
        ga = r.graph.induced(a_set)
        cyc = not b_set and ga.is_cycle()
        second = e_ba > na or cyc
        detail = f"e(B,A)={e_ba}, |A|={na}, |B|={len(b_set)}" + (", B=∅ and J[A] a cycle" if cyc else "")
        rep.results.append(ClaimResult("c", "pass" if first and second else "fail", detail))
    return rep


def mu_step_identity(r: RootedGraph, n: int, p, v: int):
    """Both sides of mu(W,Z) = mu(W+v,Z) n p^{e(W,W+v)} aut(W+v,Z)/aut(W,Z)."""
    p = Real.coerce(p)
    lhs = mu(r, n, p)
    bigger = RootedGraph(r.graph, r.roots + (v,))
    rhs_mu = mu(bigger, n, p)
    e_step = sum(1 for w in r.roots if r.graph.has_edge(w, v))
    rhs = rhs_mu.mu * n * p ** e_step * Fraction(rhs_mu.aut, lhs.aut)
    return lhs.mu, rhs


def falling_factorial_margin(n: int, a: int) -> float:
    """ln (n)_a - a ln(n/e); nonnegative exactly when (n)_a >= (n/e)^a."""
    return math.lgamma(n + 1) - math.lgamma(n - a + 1) - a * (math.log(n) - 1)


# reduction to connected F ------------------------------------------------------


@dataclass
class ReductionReport:
    host: Graph
    n: int
    p_prime: Real
    hypothesis_holds: bool
    rows: list = field(default_factory=list)
    isolate_rows: list = field(default_factory=list)

    @property
    def conclusion_holds(self):
        return all(r["conclusion"] for r in self.rows) and all(r["ok"] for r in self.isolate_rows)

    @property
    def passed(self):
        # a failure only counts when the connected hypothesis held
        return (not self.hypothesis_holds) or self.conclusion_holds


def verify_connected_reduction(h: Graph, n: int, p_prime, max_isolates: int = 2, census=None) -> ReductionReport:
    """If N(h,F) <= E_{p'} X_F for connected F, check N(h,F) <= E_{e^2 p'} X_F for all F."""
    p_prime = Real.coerce(p_prime)
    p = E ** 2 * p_prime
    census = census or subgraph_census(h)
    counts = {x.code: x for x in census}
    rep = ReductionReport(h, n, p_prime, True)
    for x in census:
        if x.graph.is_connected():
            bound = expected_count(x.graph, n, p_prime, aut=x.aut).value
            if bound.compare(x.copies) < 0:
                rep.hypothesis_holds = False
    for x in census:
        connected = x.graph.is_connected()
        target = expected_count(x.graph, n, p, aut=x.aut).value
        row = {"code": x.code.decode(), "connected": connected, "copies": x.copies,
               "bound_log2": target.log2, "conclusion": target.compare(x.copies) >= 0}
        if not connected:
            # N(H,F) <= prod_i C(N(H,F_i), m_i) over component types
            comps = {}
            for comp in x.graph.components():
                key = census.get(x.graph.induced(comp)).code
                comps[key] = comps.get(key, 0) + 1
            prod = 1
            for key, m in comps.items():
                prod *= math.comb(counts[key].copies, m)
            row["component_product"] = prod
            row["product_ok"] = x.copies <= prod
            row["conclusion"] = row["conclusion"] and row["product_ok"]
        rep.rows.append(row)
    # isolated vertices: N(H, F'+yK1) = N(H,F') C(v_H - v_F', y) and E_p X_F = E_p X_F' C(n - v_F', y)
    for x in census:
        for y in range(1, max_isolates + 1):
            if x.v + y > h.n or x.v + y > n:
                break
            f = x.graph.disjoint_union(Graph(y))
            n_formula = x.copies * math.comb(h.n - x.v, y)
            direct = count_copies(h, f)
            e_f = expected_count(f, n, p).value
            e_formula = expected_count(x.graph, n, p, aut=x.aut).value * math.comb(n - x.v, y)
            ok = direct == n_formula and e_f.compare(e_formula) == 0
            if rep.hypothesis_holds:
                ok = ok and e_f.compare(direct) >= 0
            rep.isolate_rows.append({"code": x.code.decode(), "isolates": y, "copies": direct,
                                     "copies_formula": n_formula, "ok": ok})
    return rep

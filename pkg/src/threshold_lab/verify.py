"""Brute-force checks of the finite inequalities behind the main argument.

Every verifier evaluates its hypotheses first.  A report has status
``pass`` (hypotheses hold, conclusion holds), ``fail`` (hypotheses hold,
conclusion violated) or ``advisory`` (some hypothesis fails; the raw
quantities are still reported but nothing is claimed).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations

from .canon import aut_count, rooted_aut_count, rooted_aut_of
from .counting import count_copies, count_extensions, count_labeled_copies, packing_number, subgraph_census
from .decomposition import ONE, is_leading, leading_decomposition, mu
from .errors import DomainError, HypothesisUnmet, NotSparse
from .graphs import Graph, RootedGraph
from .numeric import E, Real, falling_factorial, log2n
from .structure import generate_wz_trees, max_sunflower
from .thresholds import expected_count, is_q_sparse

CHAIN_C = 320


def _j(x):
    if isinstance(x, Real):
        return x.to_json()
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, dict):
        return {k: _j(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_j(v) for v in x]
    if isinstance(x, bytes):
        return x.decode()
    return x


@dataclass
class Check:
    name: str
    hypotheses: dict = field(default_factory=dict)
    conclusions: dict = field(default_factory=dict)
    values: dict = field(default_factory=dict)
    witness: object = None

    @property
    def hypotheses_hold(self) -> bool:
        return all(self.hypotheses.values())

    @property
    def status(self) -> str:
        if not self.hypotheses_hold:
            return "advisory"
        return "pass" if all(self.conclusions.values()) else "fail"

    def to_json(self):
        return {"name": self.name, "status": self.status, "hypotheses": dict(self.hypotheses),
                "conclusions": dict(self.conclusions), "values": _j(self.values), "witness": _j(self.witness)}


def _finish(check: Check, strict: bool):
    if strict and not check.hypotheses_hold:
        bad = [k for k, v in check.hypotheses.items() if not v]
        raise HypothesisUnmet(", ".join(bad), f"{check.name}: hypotheses unmet")
    return check


def _maxr(a: Real, b: Real) -> Real:
    return a if a.compare(b) >= 0 else b


# component and product lemmas ----------------------------------------------------------------


def verify_lemma_F_fixed(h: Graph, r: RootedGraph, x, n: int, q, strict: bool = False) -> Check:
    """Edge-disjoint copies of [B,A] on x number at most max{e mu_2q(B,A), log n}."""
    q = Real.coerce(q)
    c = Check("F-fixed")
    c.hypotheses["q-sparse"] = is_q_sparse(h, n, q)[0]
    nu = packing_number(h, r, "edge_disjoint_rooted", x)
    m2 = mu(r, n, q * 2).mu
    bound = _maxr(E * m2, log2n(n))
    c.values.update(nu=nu, mu_2q=m2, bound=bound)
    c.conclusions["nu <= bound"] = bound.compare(nu) >= 0
    return _finish(c, strict)


def verify_lemma_F_gen(h: Graph, r: RootedGraph, x, n: int, q, q_prime=None, strict: bool = False) -> Check:
    """No (X,[B,A])-component holds more than (e log n)^{e(B,A)-1} copies."""
    from .structure import extract_components

    q = Real.coerce(q)
    lg = log2n(n)
    qp = Real.coerce(q_prime) if q_prime is not None else Real.exact(CHAIN_C) * q * lg
    c = Check("F-gen")
    c.hypotheses["e(B,A) > 0"] = r.e > 0
    c.hypotheses["q-sparse"] = is_q_sparse(h, n, q)[0]
    c.hypotheses["q' >= 1/n"] = qp.compare(Fraction(1, n)) >= 0
    c.hypotheses["q'-leading"] = r.v == 1 or (r.v >= 1 and is_leading(r, n, qp)[0])
    m = mu(r, n, qp).mu
    c.hypotheses["mu_q' >= 1"] = m.compare(ONE) >= 0
    comps = extract_components(h, r, x)
    bound = (E * lg) ** max(r.e - 1, 0)
    sizes = [k.tau for k in comps]
    c.values.update(q_prime=qp, mu_q_prime=m, component_sizes=sizes, bound=bound)
    worst = max(sizes, default=0)
    c.conclusions["max component <= bound"] = bound.compare(worst) >= 0
    if worst and bound.compare(worst) < 0:
        c.witness = sorted(max(comps, key=lambda k: k.tau).edges)
    return _finish(c, strict)


def _lead_and_sparse(r: RootedGraph, j: Graph, n: int, rr: Real):
    hyp = {}
    hyp["r <= 1"] = rr.compare(ONE) <= 0
    hyp["r-leading"] = r.v <= 1 or is_leading(r, n, rr)[0]
    hyp["J (r/2)-sparse"] = is_q_sparse(j, n, rr / 2)[0] if j.e else True
    return hyp


def _ambient(r: RootedGraph, j):
    if j is None:
        return r.graph
    if j.n != r.graph.n or not set(r.graph.edges) <= set(j.edges):
        raise ValueError("ambient graph must live on Z and contain the rooted edges")
    return j


def verify_lemma_tree_hard(r: RootedGraph, j_ambient: Graph | None, n: int, rr, trees=None, max_copies: int = 3,
                           K=None, strict: bool = False, host_budget=None) -> Check:
    """mu~_r(T[W,V(T)]) <= mu_r(W,Z) min{v(W,Z), 16 log n}^{e_T} for every generated tree.

    Also checks the intermediate product bound over the copy sequence and
    reports the least K with mu_r(T) <= mu_r(W,Z) K^{e_T} on the trees seen.
    """
    rr = Real.coerce(rr)
    j = _ambient(r, j_ambient)
    c = Check("tree-hard")
    c.hypotheses.update(_lead_and_sparse(r, j, n, rr))
    base = mu(r, n, rr)
    lg = log2n(n)
    factor = _minr(Real.exact(r.v), lg * 16)
    if trees is None:
        kw = {} if host_budget is None else {"host_budget": host_budget}
        trees = generate_wz_trees(r, max_copies, **kw)
    worst_main, worst_reform, k_emp, count = None, None, None, 0
    ok_main = ok_reform = True
    for t in trees:
        count += 1
        lhs = Real.exact(n) ** t.v_t * rr ** t.e_t
        rhs = base.mu * factor ** t.e_t
        if lhs.compare(rhs) > 0:
            ok_main = False
            worst_main = worst_main or sorted(t.graph.edges)
        prod = base.aut
        for _, _, _, _, a in t.steps():
            prod *= a
        reform = base.mu * prod
        if lhs.compare(reform) > 0:
            ok_reform = False
            worst_reform = worst_reform or sorted(t.graph.edges)
        if t.e_t:
            mu_t = lhs / rooted_aut_of(t.graph, range(t.s))
            ratio = (mu_t / base.mu).nth_root(t.e_t)
            if k_emp is None or ratio.compare(k_emp) > 0:
                k_emp = ratio
    c.values.update(trees=count, mu=base.mu, aut=base.aut, factor=factor, empirical_K=k_emp)
    c.conclusions["tree bound"] = ok_main
    c.conclusions["product bound"] = ok_reform
    if K is not None:
        c.values["K"] = Real.coerce(K)
        c.values["conjectured_bound_holds"] = k_emp is None or k_emp.compare(Real.coerce(K)) <= 0
    c.witness = worst_main or worst_reform
    return _finish(c, strict)


def _minr(a: Real, b: Real) -> Real:
    return a if a.compare(b) <= 0 else b


# sunflower and automorphism lemmas ------------------------------------------------------------


def verify_no_sunflower(r: RootedGraph, j_ambient: Graph | None, n: int, rr, strict: bool = False) -> Check:
    """No (log n)-sunflower under the leading/sparse hypotheses, plus the counting certificate."""
    rr = Real.coerce(rr)
    j = _ambient(r, j_ambient)
    c = Check("no-sunflower")
    c.hypotheses.update(_lead_and_sparse(r, j, n, rr))
    k, sf = max_sunflower(r)
    lg = log2n(n)
    c.values.update(k=k, log_n=lg, mode=sf.mode, petals=[list(p) for p in sf.petals], core=list(sf.core))
    c.conclusions["k < log n"] = lg.compare(k) > 0
    if k >= 2:
        # mu_{r/2}(R) <= n^{|Q|} mu_{r/2}(Q,P)^k / k!  for R = J[Q ∪ S]
        half = rr / 2
        core = list(sf.core)
        s_all = [v for p in sf.petals for v in p]
        rg = j.induced(core + s_all)
        mu_r = Real.exact(n) ** rg.n * half ** rg.e / aut_count(rg)
        qp, _ = RootedGraph.of(j, core, core + list(sf.petals[0]))
        mqp = mu(qp, n, half).mu
        rhs = Real.exact(n) ** len(core) * mqp ** k / math.factorial(k)
        c.values.update(certificate_lhs=mu_r, certificate_rhs=rhs, mu_r_QP=mu(qp, n, rr).mu)
        c.conclusions["certificate"] = mu_r.compare(rhs) <= 0
    if sf.mode == "heuristic":
        c.values["note"] = "k is a lower bound (search cap exceeded)"
    return _finish(c, strict)


def verify_aut_bounds(r: RootedGraph, k: int | None, n: int, strict: bool = False) -> Check:
    """aut(W,Z) <= v^e without isolated non-roots, and <= (16k)^e without a k-sunflower when k >= 4 log n."""
    c = Check("aut-bounds")
    a = rooted_aut_count(r)
    v, e = r.v, r.e
    no_iso = not r.isolated_nonroots()
    sf_k, _ = max_sunflower(r)
    c.hypotheses["no isolated non-root"] = no_iso
    c.values.update(aut=a, v=v, e=e, max_sunflower=sf_k)
    c.conclusions["aut <= v^e"] = a <= v ** e
    if k is not None:
        lemma_applies = no_iso and k >= 4 * math.log2(n) and sf_k < k
        c.values["lemma_applies"] = lemma_applies
        if lemma_applies:
            c.conclusions["aut <= (16k)^e"] = a <= (16 * k) ** e
    # conjectured form: smallest c with aut <= (c k)^e, k the least sunflower-free size
    if e and no_iso:
        kk = sf_k + 1
        c.values["least_c"] = a ** (1 / e) / kk
    return _finish(c, strict)


def verify_component_aut_claim(g: Graph, k: int | None = None) -> Check:
    """aut(T) <= min{(4k)^e, (2e)^{2e}} for connected T without a k-sunflower in [∅, T]."""
    c = Check("component-aut")
    c.hypotheses["connected"] = g.is_connected() and g.e > 0
    sf_k, _ = max_sunflower(RootedGraph(g))
    k = sf_k + 1 if k is None else k
    c.hypotheses["no k-sunflower"] = sf_k < k
    a = aut_count(g)
    c.values.update(aut=a, k=k, max_sunflower=sf_k)
    c.conclusions["aut <= (4k)^e"] = a <= (4 * k) ** g.e
    c.conclusions["aut <= (2e)^(2e)"] = a <= (2 * g.e) ** (2 * g.e)
    return c


# small q, cycles and the chain bound --------------------------------------------------------


def verify_claim_nu(h: Graph, t: Graph, n: int, q, strict: bool = False) -> Check:
    """nu(h, t) <= e E_q X_t for a tree t and q-sparse h."""
    q = Real.coerce(q)
    c = Check("nu")
    c.hypotheses["q-sparse"] = is_q_sparse(h, n, q)[0]
    c.hypotheses["t is a tree"] = t.is_tree()
    nu = packing_number(h, t) if t.n <= h.n else 0
    bound = E * expected_count(t, n, q).value
    c.values.update(nu=nu, bound=bound)
    c.conclusions["nu <= e E_q X_T"] = bound.compare(nu) >= 0
    return _finish(c, strict)


def verify_cycle_exclusion(n: int, q, t_max: int = 50, hosts=(), strict: bool = False) -> Check:
    """E_q X_{C_t} < 1 for 3 <= t <= t_max when q < 1/n; q-sparse hosts are then forests."""
    q = Real.coerce(q)
    if q.compare(Fraction(1, n)) >= 0:
        raise DomainError(f"cycle exclusion needs q < 1/n, got q={float(q)} at n={n}")
    c = Check("cycles")
    exp = {}
    ok = True
    for t in range(3, min(t_max, n) + 1):
        val = Real.exact(Fraction(falling_factorial(n, t), 2 * t)) * q ** t
        exp[t] = val
        if val.compare(ONE) >= 0:
            ok = False
    c.conclusions["E_q X_C < 1"] = ok
    sparse_cyclic = []
    for h in hosts:
        if is_q_sparse(h, n, q)[0] and h.has_cycle():
            sparse_cyclic.append(sorted(h.edges))
    c.conclusions["sparse hosts acyclic"] = not sparse_cyclic
    c.values.update(expectations={t: float(v) for t, v in exp.items()}, hosts=len(hosts))
    c.witness = sparse_cyclic[0] if sparse_cyclic else None
    return c


# chain bound ---------------------------------------------------------------------------------------------


def _injective_tuples(n, k):
    return permutations(range(n), k)


def verify_chain_bound(h: Graph, f: Graph, n: int, q, strict: bool = False, C: int = CHAIN_C) -> Check:
    """The counting chain N~(h,f) <= prod_i max_U tau~_i <= prod_i mu~_p'(W_{i-1},W_i), then N(h,f) <= E_p X_f."""
    q = Real.coerce(q)
    lg = log2n(n)
    qp = Real.exact(C) * q * lg
    pp = E * qp * lg
    p = E ** 2 * pp
    c = Check("chain")
    c.hypotheses["q-sparse"] = is_q_sparse(h, n, q)[0]
    c.hypotheses["f connected"] = f.is_connected()
    labeled = count_labeled_copies(h, f)
    c.hypotheses["f in h"] = labeled > 0
    c.hypotheses["q' >= 1/n"] = qp.compare(Fraction(1, n)) >= 0
    c.values.update(q_prime=qp, p_prime=pp, p=p, labeled=labeled)
    if not c.hypotheses_hold:
        return _finish(c, strict)
    try:
        dec = leading_decomposition(f, n, q, qp)
    except NotSparse:
        c.hypotheses["f q-sparse"] = False
        return _finish(c, strict)
    steps = []
    prod_tau, prod_mu = 1, ONE
    ok_step = ok_step_ba = True
    for st in dec.steps:
        before, after = list(st.before), list(st.after)
        rg, order = RootedGraph.of(f.induced(after), [after.index(x) for x in before], range(len(after)))
        best = 0
        for u in _injective_tuples(h.n, len(before)):
            best = max(best, count_extensions(rg, h, u).labeled)
        mt = mu(rg, n, pp).mu_tilde
        # [B, A] form: roots only the attachment set
        b = rg.attachment()
        ba, _ = RootedGraph.ba(rg.graph, b, rg.nonroots)
        best_ba = 0
        for u in _injective_tuples(h.n, ba.s):
            best_ba = max(best_ba, count_extensions(ba, h, u).unlabeled)
        mu_ba = mu(ba, n, pp).mu
        steps.append({"vertices": after, "max_tau_tilde": best, "mu_tilde_p_prime": mt,
                      "max_tau_BA": best_ba, "mu_BA_p_prime": mu_ba})
        ok_step &= mt.compare(best) >= 0
        ok_step_ba &= mu_ba.compare(best_ba) >= 0
        prod_tau *= best
        prod_mu = prod_mu * mt
    n_copies = labeled // aut_count(f)
    e_p = expected_count(f, n, p).value
    mu_f = Real.exact(n) ** f.n * pp ** f.e / aut_count(f)
    c.values.update(steps=steps, N=n_copies, E_p=e_p, mu_p_prime_f=mu_f)
    c.conclusions["N~ <= prod max tau~"] = labeled <= prod_tau
    c.conclusions["tau~ <= mu~_p'"] = ok_step
    c.conclusions["tau_[B,A] <= mu_p'(B,A)"] = ok_step_ba
    c.conclusions["N <= mu_p'(f)"] = mu_f.compare(n_copies) >= 0
    c.conclusions["N <= E_p X_f"] = e_p.compare(n_copies) >= 0
    return _finish(c, strict)


def verify_small_q_theorem(h: Graph, n: int, beta, alpha, strict: bool = False) -> Check:
    """N(h,F) <= E_p X_F for every subgraph class F, at p = beta/n and q = alpha*p."""
    beta, alpha = Real.coerce(beta), Real.coerce(alpha)
    p = beta / n
    q = alpha * p
    c = Check("small-q")
    c.hypotheses["q < 1/(3n)"] = q.compare(Fraction(1, 3 * n)) < 0
    c.hypotheses["q-sparse"] = is_q_sparse(h, n, q)[0]
    worst = None
    ok = True
    rows = 0
    for x in subgraph_census(h):
        rows += 1
        val = expected_count(x.graph, n, p, aut=x.aut).value
        if val.compare(x.copies) < 0:
            ok = False
            worst = worst or x.code
    c.conclusions["N <= E_p X_F"] = ok
    c.values.update(p=p, q=q, classes=rows)
    c.witness = worst
    return _finish(c, strict)


def small_q_alpha_sweep(h: Graph, n: int, beta, alphas):
    """Status at each alpha; the first alpha whose check fails under satisfied hypotheses, if any."""
    rows = []
    first = None
    for a in alphas:
        ck = verify_small_q_theorem(h, n, beta, a)
        rows.append((a, ck.status))
        if first is None and ck.status == "fail":
            first = a
    return rows, first

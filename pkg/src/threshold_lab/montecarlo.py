"""Monte Carlo estimate of p_c(H), the p with Pr(G(n, p) contains H) = 1/2.

Every probe reuses the same uniforms (common random numbers): sample ``i``
at probability ``p`` is the graph of pairs whose uniform falls below ``p``.
Containment is then monotone in ``p`` sample by sample, so the bisection
never sees contradictory probes.  Uniforms for batch ``b`` come from a
generator seeded with ``(seed, b)``; batches are merged in index order, so
results do not depend on how batches are spread over workers.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import HostTooSmall, Inconclusive
from .graphs import Graph

BATCH = 1000


def wilson_interval(hits: int, trials: int, z: float = 1.96):
    if trials == 0:
        return 0.0, 1.0
    phat = hits / trials
    denom = 1 + z * z / trials
    centre = (phat + z * z / (2 * trials)) / denom
    half = z * math.sqrt(phat * (1 - phat) / trials + z * z / (4 * trials * trials)) / denom
    lo = 0.0 if hits == 0 else max(0.0, centre - half)
    hi = 1.0 if hits == trials else min(1.0, centre + half)
    return lo, hi


def _pattern_plan(h: Graph):
    """Vertex order and back-neighbour lists for a containment search of ``h``."""
    padj = h.adj
    todo = [v for v in range(h.n) if padj[v]]
    placed, order, need = 0, [], []
    while todo:
        v = max(todo, key=lambda x: ((padj[x] & placed).bit_count(), padj[x].bit_count(), -x))
        todo.remove(v)
        order.append(v)
        need.append([u for u in range(h.n) if padj[v] >> u & 1 and placed >> u & 1])
        placed |= 1 << v
    degs = [padj[v].bit_count() for v in order]
    return order, need, degs


def _core(adj, n, k):
    """Vertex mask of the k-core: vertices of degree < k are peeled repeatedly."""
    deg = [a.bit_count() for a in adj]
    alive = (1 << n) - 1
    stack = [x for x in range(n) if deg[x] < k]
    for x in stack:
        alive &= ~(1 << x)
    while stack:
        x = stack.pop()
        m = adj[x] & alive
        while m:
            low = m & -m
            y = low.bit_length() - 1
            m ^= low
            deg[y] -= 1
            if deg[y] < k:
                alive ^= low
                stack.append(y)
    return alive


def _contains(plan, adj, n, min_deg=1):
    order, need, degs = plan
    L = len(order)
    assign = {}
    full = _core(adj, n, min_deg) if min_deg > 1 else (1 << n) - 1
    if not full:
        return False

    def rec(i, used):
        if i == L:
            return True
        c = full & ~used
        for u in need[i]:
            c &= adj[assign[u]]
        d = degs[i]
        while c:
            low = c & -c
            x = low.bit_length() - 1
            c ^= low
            if adj[x].bit_count() < d:
                continue
            assign[order[i]] = x
            if rec(i + 1, used | low):
                return True
        return False

    return rec(0, 0)


def _batch_hits(args):
    h_n, h_edges, n, p, seed, b, size = args
    h = Graph(h_n, h_edges)
    plan = _pattern_plan(h)
    iu, ju = np.triu_indices(n, 1)
    rng = np.random.default_rng([seed, b])
    u = rng.random((size, iu.size))
    rows, cols = np.nonzero(u < p)
    counts = np.bincount(rows, minlength=size)
    splits = np.split(cols, np.cumsum(counts)[:-1])
    e_h = h.e
    min_deg = min(d for d in plan[2]) if plan[2] else 0
    hits = 0
    for cs in splits:
        if cs.size < e_h:
            continue
        if e_h == 1:
            hits += 1
            continue
        adj = [0] * n
        for a, c in zip(iu[cs].tolist(), ju[cs].tolist()):
            adj[a] |= 1 << c
            adj[c] |= 1 << a
        if _contains(plan, adj, n, min_deg):
            hits += 1
    return hits


def containment_frequency(h: Graph, n: int, p: float, samples: int, seed: int = 0, jobs: int = 1):
    """Number of the ``samples`` coupled draws of G(n, p) that contain ``h``."""
    if n < h.n:
        raise HostTooSmall(n, h.n)
    if h.e == 0:
        return samples
    if p <= 0:
        return 0
    tasks = []
    done = 0
    b = 0
    while done < samples:
        size = min(BATCH, samples - done)
        tasks.append((h.n, tuple(sorted(h.edges)), n, float(p), int(seed), b, size))
        done += size
        b += 1
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            return sum(ex.map(_batch_hits, tasks))
    return sum(_batch_hits(t) for t in tasks)


@dataclass
class Probe:
    p: float
    hits: int
    samples: int
    ci: tuple

    @property
    def verdict(self):
        lo, hi = self.ci
        if lo > 0.5:
            return "above"
        if hi < 0.5:
            return "below"
        return "inconclusive"


@dataclass
class PcEstimate:
    estimate: float
    lo: float
    hi: float
    samples: int
    seed: int
    converged: bool
    probes: list = field(default_factory=list)

    @property
    def relative_width(self):
        return (self.hi - self.lo) / self.estimate if self.estimate > 0 else math.inf

    def to_json(self):
        return {
            "estimate": self.estimate,
            "ci": [self.lo, self.hi],
            "relative_width": self.relative_width,
            "samples": self.samples,
            "seed": self.seed,
            "converged": self.converged,
            "probes": [{"p": pr.p, "hits": pr.hits, "ci": list(pr.ci), "verdict": pr.verdict} for pr in self.probes],
        }


def p_c_monte_carlo(h: Graph, n: int, samples: int = 10_000, seed: int = 0, tolerance: float = 0.05,
                    z: float = 1.96, max_probes: int = 80, jobs: int = 1, raise_inconclusive: bool = True):
    """Bracket p_c(h) by bisection on p with Wilson intervals at each probe.

    ``lo`` is the largest probe whose interval lies below 1/2, ``hi`` the
    smallest whose interval lies above; probes whose interval straddles 1/2
    are narrowed from both sides until the gaps to ``lo``/``hi`` fall under
    ``tolerance / 8`` (relative) or the whole bracket is narrower than
    ``tolerance``.
    """
    if n < h.n:
        raise HostTooSmall(n, h.n)
    if samples < 100:
        raise ValueError("need at least 100 samples per probe")
    if h.e == 0:
        return PcEstimate(0.0, 0.0, 0.0, samples, seed, True)
    probes = []

    def probe(p):
        hits = containment_frequency(h, n, p, samples, seed, jobs)
        pr = Probe(p, hits, samples, wilson_interval(hits, samples, z))
        probes.append(pr)
        return pr.verdict

    lo, hi = 0.0, 1.0  # Pr = 0 at p = 0 and Pr = 1 at p = 1
    ilo = ihi = None  # lowest / highest inconclusive probe
    gap_tol = tolerance / 8

    def mid(a, b):
        return b / 2 if a == 0 else math.sqrt(a * b)

    converged = False
    while len(probes) < max_probes:
        if ilo is None:
            if lo > 0 and (hi - lo) / mid(lo, hi) < tolerance:
                converged = True
                break
            m = mid(lo, hi)
            v = probe(m)
            if v == "above":
                hi = m
            elif v == "below":
                lo = m
            else:
                ilo = ihi = m
            continue
        low_gap = (ilo - lo) / ilo if lo > 0 else 1.0
        high_gap = (hi - ihi) / ihi
        if (hi - lo) / mid(lo, hi) < tolerance if lo > 0 else False:
            converged = True
            break
        if low_gap < gap_tol and high_gap < gap_tol:
            converged = True
            break
        if low_gap >= high_gap:
            m = mid(lo, ilo)
            v = probe(m)
            if v == "below":
                lo = m
            elif v == "inconclusive":
                ilo = m
            else:  # cannot happen with coupled draws, kept for safety
                hi, ilo, ihi = m, None, None
        else:
            m = mid(ihi, hi)
            v = probe(m)
            if v == "above":
                hi = m
            elif v == "inconclusive":
                ihi = m
            else:
                lo, ilo, ihi = m, None, None
    if ilo is not None:
        est = math.sqrt(ilo * ihi)
    else:
        est = mid(lo, hi)
    result = PcEstimate(est, lo, hi, samples, seed, converged, probes)
    if not converged and raise_inconclusive:
        raise Inconclusive((lo, hi), result)
    return result

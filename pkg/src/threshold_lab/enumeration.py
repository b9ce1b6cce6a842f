"""Exhaustive small-graph generators and seeded random hosts."""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations

import numpy as np

from .canon import canonical_form, canonical_graph
from .errors import ThresholdLabError
from .graphs import Graph, RootedGraph
from .thresholds import is_q_sparse, p_expectation_threshold


@lru_cache(maxsize=None)
def _graphs_on(n: int) -> tuple:
    """All graphs on exactly ``n`` vertices up to isomorphism, in canonical form."""
    if n == 0:
        return (Graph(0),)
    out = {}
    for g in _graphs_on(n - 1):
        for k in range(n):
            for nbrs in combinations(range(n - 1), k):
                h = Graph(n, list(g.edges) + [(v, n - 1) for v in nbrs])
                code = canonical_form(h)
                if code not in out:
                    out[code] = canonical_graph(h)
    return tuple(out[c] for c in sorted(out, key=lambda c: (out[c].e, c)))


def graphs(n: int):
    return list(_graphs_on(n))


def graphs_up_to(nmax: int, nmin: int = 1):
    return [g for k in range(nmin, nmax + 1) for g in _graphs_on(k)]


def connected_graphs(nmax: int, nmin: int = 2):
    """Connected graphs on nmin..nmax vertices (K_1 is skipped by default)."""
    return [g for g in graphs_up_to(nmax, nmin) if g.is_connected()]


@lru_cache(maxsize=None)
def _trees_on(n: int) -> tuple:
    if n <= 1:
        return (Graph(n),)
    out = {}
    for t in _trees_on(n - 1):
        for v in range(n - 1):
            h = Graph(n, list(t.edges) + [(v, n - 1)])
            code = canonical_form(h)
            if code not in out:
                out[code] = canonical_graph(h)
    return tuple(out[c] for c in sorted(out))


def trees(n: int):
    """Unlabelled trees on exactly ``n`` vertices."""
    return list(_trees_on(n))


def rooted_graphs(zmax: int, zmin: int = 1, vmin: int = 1, isolated_roots: bool = False,
                  isolated_nonroots: bool = True):
    """Rooted graphs [W, Z] with |Z| <= zmax up to isomorphism (roots unordered).

    W is an independent set, since edges inside W are not part of [W, Z].
    Isolated roots change nothing and are skipped unless requested.
    """
    seen = set()
    out = []
    for z in range(zmin, zmax + 1):
        for g in _graphs_on(z):
            for s in range(0, z - vmin + 1):
                for w in combinations(range(z), s):
                    wm = 0
                    for x in w:
                        wm |= 1 << x
                    if any(g.adj[x] & wm for x in w):
                        continue
                    if not isolated_roots and any(not g.adj[x] for x in w):
                        continue
                    if not isolated_nonroots and any(not g.adj[x] for x in range(z) if not wm >> x & 1):
                        continue
                    colors = tuple(0 if wm >> x & 1 else 1 for x in range(z))
                    code = canonical_form(g, colors)
                    if code in seen:
                        continue
                    seen.add(code)
                    out.append(RootedGraph.of(g, list(w), range(z))[0])
    return out


# random hosts -------------------------------------------------------------------


def random_graph(v: int, p: float, rng) -> Graph:
    """G(v, p) from a numpy Generator."""
    iu, ju = np.triu_indices(v, 1)
    keep = rng.random(iu.size) < p
    return Graph(v, list(zip(iu[keep].tolist(), ju[keep].tolist())))


def random_forest(v: int, rng, keep: float = 0.7) -> Graph:
    """Random recursive tree on ``v`` vertices with each edge kept with probability ``keep``."""
    edges = []
    for x in range(1, v):
        if rng.random() < keep:
            edges.append((int(rng.integers(0, x)), x))
    return Graph(v, edges)


def random_sparse_hosts(n: int, q, count: int, seed: int = 0, max_vertices: int = 8, max_edges: int = 10,
                        max_attempts: int = 100_000, forests: bool = False):
    """Seeded draws of q-sparse graphs at scale n; returns ``(graphs, rejections)``.

    Each draw picks v in [2, max_vertices] and an edge density uniformly, then
    keeps the graph only if it has an edge, at most ``max_edges`` edges and is q-sparse.
    """
    rng = np.random.default_rng(seed)
    out, rejected, attempts = [], 0, 0
    while len(out) < count:
        attempts += 1
        if attempts > max_attempts:
            raise ThresholdLabError(f"only {len(out)} of {count} q-sparse graphs after {max_attempts} draws")
        v = int(rng.integers(2, max_vertices + 1))
        if forests:
            g = random_forest(v, rng, float(rng.uniform(0.3, 1.0)))
        else:
            g = random_graph(v, float(rng.uniform(0.1, 0.7)), rng)
        g = g.without_isolated()
        if g.e == 0 or g.e > max_edges or g.n > n:
            rejected += 1
            continue
        if not is_q_sparse(g, n, q)[0]:
            rejected += 1
            continue
        out.append(g)
    return out, rejected


def self_sparse_instances(n: int, count: int, seed: int = 0, max_vertices: int = 9, max_edges: int = 10,
                          slack=(1.0, 2.0)):
    """``(g, q)`` pairs with ``g`` random and ``q`` its own sparseness threshold times a slack factor.

    Such ``g`` is q-sparse by construction (sparseness is monotone in q).
    """
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        v = int(rng.integers(2, max_vertices + 1))
        g = random_graph(v, float(rng.uniform(0.15, 0.6)), rng).without_isolated()
        if g.e == 0 or g.e > max_edges:
            continue
        q0 = p_expectation_threshold(g, n, theta=1).p
        factor = float(rng.uniform(*slack))
        q = q0 * factor if factor != 1.0 else q0
        out.append((g, q))
    return out

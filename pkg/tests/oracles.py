"""Slow, obviously-correct reference implementations used only by the tests."""

import math
from itertools import combinations, permutations, product

import networkx as nx

from threshold_lab.graphs import Graph


def to_nx(g: Graph):
    out = nx.Graph()
    out.add_nodes_from(range(g.n))
    out.add_edges_from(g.edges)
    return out


def brute_aut(g: Graph, fixed=()):
    """Edge-preserving permutations of V(g) fixing every vertex in ``fixed``."""
    total = 0
    es = g.edges
    for p in permutations(range(g.n)):
        if any(p[w] != w for w in fixed):
            continue
        if all(((min(p[a], p[b]), max(p[a], p[b])) in es) for a, b in es):
            total += 1
    return total


def labeled_injections(f: Graph, g: Graph, pinned=None):
    """Edge-preserving injections V(f) -> V(g), optionally with some images pinned."""
    pinned = pinned or {}
    total = 0
    for img in permutations(range(g.n), f.n):
        if any(img[x] != y for x, y in pinned.items()):
            continue
        if all(g.has_edge(img[a], img[b]) for a, b in f.edges):
            total += 1
    return total


def nx_copies(g: Graph, f: Graph):
    """N(g, f) via networkx monomorphisms divided by aut(f)."""
    if f.n > g.n:
        return 0
    gm = nx.algorithms.isomorphism.GraphMatcher(to_nx(g), to_nx(f))
    mono = sum(1 for _ in gm.subgraph_monomorphisms_iter())
    return mono // brute_aut(f)


def census_no_dedup(h: Graph):
    """Every nonempty edge subset as its own constraint: (v, e, aut, copies) per subset.

    Copies are recomputed by scanning all subsets with networkx isomorphism,
    never through a canonical code.
    """
    edges = sorted(h.edges)
    subsets = []
    for k in range(1, len(edges) + 1):
        for es in combinations(edges, k):
            vs = sorted({x for e in es for x in e})
            pos = {v: i for i, v in enumerate(vs)}
            subsets.append(Graph(len(vs), [(pos[a], pos[b]) for a, b in es]))
    out = []
    for s in subsets:
        copies = sum(1 for t in subsets if t.e == s.e and t.n == s.n and nx.is_isomorphic(to_nx(s), to_nx(t)))
        out.append((s.n, s.e, brute_aut(s), copies))
    return out


def threshold_oracle(h: Graph, n: int, theta=0.5, fractional=False):
    """max over all edge subsets I of (theta * N * aut / (n)_v)^(1/e), computed in floating point."""
    best = 0.0
    for v, e, aut, copies in census_no_dedup(h):
        rhs = theta * (copies if fractional else 1)
        ff = math.perm(n, v)
        best = max(best, (rhs * aut / ff) ** (1 / e))
    return best


def _nx_sunflower(r, petals):
    g = r.graph
    used = {v for p in petals for v in p}
    core = [v for v in range(g.n) if v not in used]
    for a, b in combinations(petals, 2):
        if any(g.has_edge(x, y) for x in a for y in b):
            return False
    shapes = []
    for p in petals:
        keep = set(core) | set(p)
        t = nx.Graph()
        for v in keep:
            t.add_node(v, tag=v if v in core else "petal")
        t.add_edges_from((a, b) for a, b in g.edges if a in keep and b in keep and not (a in core and b in core))
        shapes.append(t)
    same = lambda x, y: x["tag"] == y["tag"]
    return all(nx.is_isomorphic(shapes[0], t, node_match=same) for t in shapes[1:])


def brute_max_sunflower(r):
    """Assign each non-root to the core or to one of k petals; keep valid systems."""
    rest = list(r.nonroots)
    best = 0
    for k in range(1, len(rest) + 1):
        found = False
        for labels in product(range(k + 1), repeat=len(rest)):
            petals = [tuple(v for v, lab in zip(rest, labels) if lab == i + 1) for i in range(k)]
            if any(not p for p in petals) or [min(p) for p in petals] != sorted(min(p) for p in petals):
                continue
            if _nx_sunflower(r, petals):
                found = True
                break
        if found:
            best = k
    return best


def brute_forests(t, m):
    """Rooted spanning forests counted via networkx spanning-tree enumeration on an augmented graph."""
    # glue the m roots to a super-vertex: forests with one root per tree <-> spanning trees
    g = nx.complete_graph(t)
    g.add_node("s")
    for i in range(m):
        g.add_edge("s", i)
    # spanning trees of g containing all m super-edges
    total = 0
    for tr in nx.algorithms.tree.mst.SpanningTreeIterator(g):
        if all(tr.has_edge("s", i) for i in range(m)):
            total += 1
    return total

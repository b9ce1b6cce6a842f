"""Simple graphs and rooted graphs on vertex sets ``0..n-1``."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Iterable, Sequence


def _norm_edges(n, edges):
    out = set()
    for e in edges:
        a, b = e
        a, b = int(a), int(b)
        if a == b:
            raise ValueError(f"loop at vertex {a}")
        if not (0 <= a < n and 0 <= b < n):
            raise ValueError(f"edge {e} has an endpoint outside 0..{n - 1}")
        out.add((a, b) if a < b else (b, a))
    return frozenset(out)


@dataclass(frozen=True)
class Graph:
    """Finite simple graph on ``range(n)``; edges are pairs ``(a, b)`` with a < b."""

    n: int
    edges: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("vertex count must be nonnegative")
        object.__setattr__(self, "edges", _norm_edges(self.n, self.edges))

    @classmethod
    def _trusted(cls, n, edges: frozenset) -> "Graph":
        """Skip validation; ``edges`` must already be a frozenset of ordered in-range pairs."""
        g = object.__new__(cls)
        object.__setattr__(g, "n", n)
        object.__setattr__(g, "edges", edges)
        return g

    @property
    def v(self) -> int:
        return self.n

    @property
    def e(self) -> int:
        return len(self.edges)

    @cached_property
    def adj(self) -> tuple:
        """Neighbourhoods as integer bitmasks."""
        masks = [0] * self.n
        for a, b in self.edges:
            masks[a] |= 1 << b
            masks[b] |= 1 << a
        return tuple(masks)

    @cached_property
    def sorted_edges(self) -> tuple:
        return tuple(sorted(self.edges))

    def has_edge(self, a, b) -> bool:
        return bool(self.adj[a] >> b & 1)

    def degree(self, v) -> int:
        return self.adj[v].bit_count()

    def degrees(self):
        return [self.degree(v) for v in range(self.n)]

    def neighbors(self, v):
        m, out = self.adj[v], []
        while m:
            low = m & -m
            out.append(low.bit_length() - 1)
            m ^= low
        return out

    def isolated(self):
        return [v for v in range(self.n) if self.adj[v] == 0]

    def induced(self, vertices: Sequence[int]) -> "Graph":
        """Subgraph induced on ``vertices``, relabelled in the given order."""
        pos = {u: i for i, u in enumerate(vertices)}
        return Graph(len(vertices), [(pos[a], pos[b]) for a, b in self.edges if a in pos and b in pos])

    def edge_subgraph(self, edges: Iterable) -> "Graph":
        """Isolate-free graph spanned by ``edges``, vertices relabelled in increasing order."""
        edges = list(edges)
        verts = sorted({x for e in edges for x in e})
        pos = {u: i for i, u in enumerate(verts)}
        return Graph(len(verts), [(pos[a], pos[b]) for a, b in edges])

    def without_isolated(self) -> "Graph":
        return self.induced([v for v in range(self.n) if self.adj[v]])

    def relabel(self, perm: Sequence[int]) -> "Graph":
        """Image of the graph under ``v -> perm[v]``."""
        return Graph(self.n, [(perm[a], perm[b]) for a, b in self.edges])

    def components(self):
        seen, comps = 0, []
        for s in range(self.n):
            if seen >> s & 1:
                continue
            comp, frontier = 1 << s, 1 << s
            while frontier:
                low = frontier & -frontier
                v = low.bit_length() - 1
                frontier ^= low
                new = self.adj[v] & ~comp
                comp |= new
                frontier |= new
            seen |= comp
            comps.append([v for v in range(self.n) if comp >> v & 1])
        return comps

    def is_connected(self) -> bool:
        return self.n <= 1 or len(self.components()) == 1

    def has_cycle(self) -> bool:
        return self.e > self.n - len(self.components())

    def is_forest(self) -> bool:
        return not self.has_cycle()

    def is_tree(self) -> bool:
        return self.n >= 1 and self.is_connected() and self.e == self.n - 1

    def is_cycle(self) -> bool:
        return self.n >= 3 and self.is_connected() and all(d == 2 for d in self.degrees())

    def disjoint_union(self, other: "Graph") -> "Graph":
        k = self.n
        return Graph(k + other.n, list(self.edges) + [(a + k, b + k) for a, b in other.edges])

    def complement_pairs(self):
        return [(a, b) for a, b in combinations(range(self.n), 2) if not self.has_edge(a, b)]

    def __repr__(self):
        return f"Graph(n={self.n}, edges={sorted(self.edges)})"


@dataclass(frozen=True)
class RootedGraph:
    """Rooted graph ``[W, Z]`` with ``Z = range(graph.n)`` and ordered roots ``W``.

    Edges with both ends among the roots are dropped on construction, so
    ``graph.edges`` is exactly the rooted edge set ``E(J[Z]) \\ E(J[W])``.
    """

    graph: Graph
    roots: tuple = ()

    def __post_init__(self):
        roots = tuple(int(w) for w in self.roots)
        if len(set(roots)) != len(roots):
            raise ValueError("roots must be distinct")
        if any(not 0 <= w < self.graph.n for w in roots):
            raise ValueError("roots must be vertices of the graph")
        rs = set(roots)
        g = self.graph
        if any(a in rs and b in rs for a, b in g.edges):
            g = Graph(g.n, [(a, b) for a, b in g.edges if not (a in rs and b in rs)])
        object.__setattr__(self, "roots", roots)
        object.__setattr__(self, "graph", g)

    @classmethod
    def of(cls, j: Graph, w: Sequence[int], z: Iterable[int]):
        """``J[W, Z]`` relabelled: roots become ``0..|W|-1`` in the given order.

        Returns ``(rooted, order)`` where ``order[i]`` is the host vertex placed at ``i``.
        """
        w = list(w)
        zs = set(z)
        if not set(w) <= zs:
            raise ValueError("roots must lie in Z")
        order = w + sorted(zs - set(w))
        return cls(j.induced(order), tuple(range(len(w)))), order

    @classmethod
    def ba(cls, j: Graph, b: Sequence[int], a: Iterable[int]):
        """``[B, A]``, shorthand for ``[B, B ∪ A]``."""
        return cls.of(j, b, set(b) | set(a))

    @property
    def z(self) -> int:
        return self.graph.n

    @property
    def s(self) -> int:
        return len(self.roots)

    @property
    def v(self) -> int:
        """v(W, Z) = |Z \\ W|."""
        return self.graph.n - len(self.roots)

    @property
    def e(self) -> int:
        """e(W, Z), the number of rooted edges."""
        return self.graph.e

    @cached_property
    def nonroots(self) -> tuple:
        rs = set(self.roots)
        return tuple(v for v in range(self.graph.n) if v not in rs)

    def isolated_nonroots(self):
        return [v for v in self.nonroots if self.graph.adj[v] == 0]

    def attachment(self):
        """B = N(A) ∩ W, in root order."""
        a_mask = 0
        for v in self.nonroots:
            a_mask |= 1 << v
        return [w for w in self.roots if self.graph.adj[w] & a_mask]

    def __repr__(self):
        return f"RootedGraph(n={self.graph.n}, edges={sorted(self.graph.edges)}, roots={list(self.roots)})"


# named graphs ------------------------------------------------------------


def empty(n: int) -> Graph:
    return Graph(n)


def complete(n: int) -> Graph:
    return Graph(n, list(combinations(range(n), 2)))


def path(n: int) -> Graph:
    """Path on ``n`` vertices (n - 1 edges)."""
    return Graph(n, [(i, i + 1) for i in range(n - 1)])


def cycle(n: int) -> Graph:
    if n < 3:
        raise ValueError("cycles need at least 3 vertices")
    return Graph(n, [(i, (i + 1) % n) for i in range(n)])


def star(d: int) -> Graph:
    """K_{1,d} with centre 0."""
    return Graph(d + 1, [(0, i) for i in range(1, d + 1)])


def matching(m: int) -> Graph:
    return Graph(2 * m, [(2 * i, 2 * i + 1) for i in range(m)])


def complete_bipartite(a: int, b: int) -> Graph:
    return Graph(a + b, [(i, a + j) for i in range(a) for j in range(b)])


def petersen() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return Graph(10, outer + spokes + inner)


def from_adjacency(rows) -> Graph:
    n = len(rows)
    return Graph(n, [(i, j) for i in range(n) for j in range(i + 1, n) if rows[i][j]])


def rooted_from_json(obj) -> RootedGraph:
    """``{"n": 3, "edges": [[0, 1], [1, 2]], "roots": [0]}`` -> RootedGraph."""
    return RootedGraph(Graph(int(obj["n"]), [tuple(e) for e in obj.get("edges", [])]), tuple(obj.get("roots", [])))


def rooted_to_json(r: RootedGraph) -> dict:
    return {"n": r.graph.n, "edges": [list(e) for e in r.graph.sorted_edges], "roots": list(r.roots)}

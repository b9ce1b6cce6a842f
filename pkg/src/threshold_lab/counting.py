"""Exact subgraph counting: labelled embeddings, copies, extensions, census, packings."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations
from typing import Sequence

from .canon import aut_count, canonical_form, canonical_graph, rooted_aut_count
from .errors import CensusTooLarge, RootArityMismatch, SearchBudgetExceeded
from .graphs import Graph, RootedGraph
from .numeric import falling_factorial

DEFAULT_CENSUS_EDGES = 20
DEFAULT_PACKING_VERTICES = 64
DEFAULT_PACKING_NODES = 2_000_000


def _bits(mask):
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


class _Matcher:
    """Backtracking matcher of a pattern into a host, with some pattern vertices pinned."""

    def __init__(self, pattern: Graph, host: Graph, fixed: dict):
        self.p = pattern
        self.h = host
        self.fixed = dict(fixed)
        padj, hadj = pattern.adj, host.adj
        placed = 0
        for v in self.fixed:
            placed |= 1 << v
        # pattern vertices with an edge get matched; the rest are counted by falling factorial
        todo = [v for v in range(pattern.n) if v not in self.fixed and padj[v]]
        self.loose = [v for v in range(pattern.n) if v not in self.fixed and not padj[v]]
        order, need = [], []
        while todo:
            v = max(todo, key=lambda x: ((padj[x] & placed).bit_count(), padj[x].bit_count(), -x))
            todo.remove(v)
            order.append(v)
            need.append(_bits(padj[v] & placed))
            placed |= 1 << v
        self.order = order
        self.need = need
        hdeg = [m.bit_count() for m in hadj]
        self.deg_ok = {}
        for v in order:
            d = padj[v].bit_count()
            if d not in self.deg_ok:
                mask = 0
                for x in range(host.n):
                    if hdeg[x] >= d:
                        mask |= 1 << x
                self.deg_ok[d] = mask
        self.vdeg = [padj[v].bit_count() for v in order]
        used = 0
        self.ok = True
        for v, x in self.fixed.items():
            if used >> x & 1:
                self.ok = False
            used |= 1 << x
        # pinned vertices must already agree on edges among themselves
        for v, x in self.fixed.items():
            for u in _bits(padj[v]):
                if u in self.fixed and not hadj[x] >> self.fixed[u] & 1:
                    self.ok = False
        self.used0 = used
        self.all_host = (1 << host.n) - 1

    def _cands(self, i, assign, used):
        c = self.deg_ok[self.vdeg[i]] & ~used
        hadj = self.h.adj
        for u in self.need[i]:
            c &= hadj[assign[u]]
            if not c:
                break
        return c

    def count(self) -> int:
        if not self.ok:
            return 0
        assign = dict(self.fixed)
        order, L = self.order, len(self.order)
        k = len(self.loose)
        free_after = self.h.n - len(self.fixed) - L

        if k and free_after < k:
            return 0

        def rec(i, used):
            if i == L:
                return 1
            v = order[i]
            total = 0
            for x in _bits(self._cands(i, assign, used)):
                assign[v] = x
                total += rec(i + 1, used | (1 << x))
            return total

        return rec(0, self.used0) * falling_factorial(free_after, k)

    def exists(self) -> bool:
        if not self.ok:
            return False
        if len(self.loose) > self.h.n - len(self.fixed) - len(self.order):
            return False
        assign = dict(self.fixed)
        order, L = self.order, len(self.order)

        def rec(i, used):
            if i == L:
                return True
            v = order[i]
            for x in _bits(self._cands(i, assign, used)):
                assign[v] = x
                if rec(i + 1, used | (1 << x)):
                    return True
            return False

        return rec(0, self.used0)

    def embeddings(self):
        """Yield every embedding as a tuple ``image[v]`` over pattern vertices."""
        if not self.ok:
            return
        assign = dict(self.fixed)
        order, L = self.order, len(self.order)
        loose = self.loose
        n = self.p.n

        def rec(i, used):
            if i == L:
                free = [x for x in range(self.h.n) if not used >> x & 1]
                for extra in permutations(free, len(loose)):
                    for v, x in zip(loose, extra):
                        assign[v] = x
                    yield tuple(assign[v] for v in range(n))
                return
            v = order[i]
            for x in _bits(self._cands(i, assign, used)):
                assign[v] = x
                yield from rec(i + 1, used | (1 << x))

        yield from rec(0, self.used0)


# copies ----------------------------------------------------------------------


def count_labeled_copies(g: Graph, f: Graph) -> int:
    """Number of edge-preserving injections V(f) -> V(g)."""
    return _Matcher(f, g, {}).count()


def count_copies(g: Graph, f: Graph) -> int:
    """N(g, f): unlabelled copies of f in g."""
    labeled = count_labeled_copies(g, f)
    a = aut_count(f)
    assert labeled % a == 0
    return labeled // a


def contains(g: Graph, f: Graph) -> bool:
    return _Matcher(f, g, {}).exists()


@dataclass(frozen=True)
class ExtensionCount:
    labeled: int
    unlabeled: int
    rooted_aut: int


def _pin(r: RootedGraph, u: Sequence[int]):
    u = list(u)
    if len(u) != len(r.roots):
        raise RootArityMismatch(f"{len(u)} host vertices given for {len(r.roots)} roots")
    if len(set(u)) != len(u):
        raise RootArityMismatch("host root images must be distinct")
    return dict(zip(r.roots, u))


def count_extensions(r: RootedGraph, g: Graph, u: Sequence[int]) -> ExtensionCount:
    """tau~ and tau for [W, Z]-extensions on ``u`` in ``g``."""
    labeled = _Matcher(r.graph, g, _pin(r, u)).count()
    a = rooted_aut_count(r)
    assert labeled % a == 0
    return ExtensionCount(labeled, labeled // a, a)


def extensions(r: RootedGraph, g: Graph, u: Sequence[int]):
    """Iterate the [W, Z]-extensions on ``u`` as image tuples over Z."""
    return _Matcher(r.graph, g, _pin(r, u)).embeddings()


@dataclass(frozen=True)
class Copy:
    """A copy of a rooted graph on ``u``: its vertex image and edge image."""

    vertices: frozenset
    edges: frozenset


def copies_on(r: RootedGraph, g: Graph, u: Sequence[int]):
    """Distinct copies of ``r`` on ``u`` in ``g`` (equivalence classes of extensions)."""
    seen = {}
    for img in extensions(r, g, u):
        es = frozenset((min(img[a], img[b]), max(img[a], img[b])) for a, b in r.graph.edges)
        key = (frozenset(img), es)
        if key not in seen:
            seen[key] = Copy(*key)
    return sorted(seen.values(), key=lambda c: (sorted(c.edges), sorted(c.vertices)))


# census -------------------------------------------------------------------------


@dataclass(frozen=True)
class CensusEntry:
    code: bytes
    graph: Graph
    copies: int
    aut: int

    @property
    def v(self):
        return self.graph.n

    @property
    def e(self):
        return self.graph.e


@dataclass(frozen=True)
class Census:
    host: Graph
    entries: tuple

    def __iter__(self):
        return iter(self.entries)

    def __len__(self):
        return len(self.entries)

    def by_code(self) -> dict:
        return {x.code: x for x in self.entries}

    def get(self, f: Graph):
        return self.by_code().get(canonical_form(f.without_isolated()))


def subgraph_census(h: Graph, max_edges: int = DEFAULT_CENSUS_EDGES) -> Census:
    """Every isolate-free subgraph class I of ``h`` with N(h, I).

    Exhaustive over the 2^e(h) - 1 nonempty edge subsets.
    """
    if h.e > max_edges:
        raise CensusTooLarge(h.e, max_edges)
    edges = h.sorted_edges
    m = len(edges)
    tally = {}
    reps = {}
    for mask in range(1, 1 << m):
        sub = h.edge_subgraph(edges[i] for i in _bits(mask))
        code = canonical_form(sub)
        if code in tally:
            tally[code] += 1
        else:
            tally[code] = 1
            reps[code] = sub
    out = []
    for code in sorted(tally):
        rep = canonical_graph(reps[code])
        out.append(CensusEntry(code, rep, tally[code], aut_count(rep)))
    out.sort(key=lambda x: (x.e, x.v, x.code))
    return Census(h, tuple(out))


# packings -------------------------------------------------------------------------


def _max_disjoint(sets, node_budget):
    """Maximum number of pairwise disjoint bitmasks (exact branch and bound)."""
    sets = sorted(set(sets), key=lambda s: (s.bit_count(), s))
    if not sets:
        return 0, []
    if any(s == 0 for s in sets):
        # empty sets are disjoint from everything
        zeros = [s for s in sets if s == 0]
        k, w = _max_disjoint([s for s in sets if s], node_budget)
        return k + len(zeros), w + zeros
    best = [0, []]
    nodes = [0]

    def rec(cands, used, chosen):
        nodes[0] += 1
        if nodes[0] > node_budget:
            raise SearchBudgetExceeded(f"packing search exceeded {node_budget} nodes")
        if not cands:
            if len(chosen) > best[0]:
                best[0], best[1] = len(chosen), list(chosen)
            return
        if len(chosen) + len(cands) <= best[0]:
            return
        union = 0
        for c in cands:
            union |= c
        smallest = cands[0].bit_count()
        if len(chosen) + union.bit_count() // smallest <= best[0]:
            return
        s = cands[0]
        chosen.append(s)
        rec([c for c in cands[1:] if not c & s], used | s, chosen)
        chosen.pop()
        rec(cands[1:], used, chosen)

    rec(sets, 0, [])
    return best[0], best[1]


def packing_number(
    g: Graph,
    t,
    mode: str = "vertex_disjoint",
    x: Sequence[int] | None = None,
    max_vertices: int = DEFAULT_PACKING_VERTICES,
    node_budget: int = DEFAULT_PACKING_NODES,
) -> int:
    """Exact maximum packing.

    ``mode="vertex_disjoint"``: nu(g, t), vertex-disjoint copies of the graph ``t``.
    ``mode="edge_disjoint_rooted"``: pairwise edge-disjoint copies of the rooted
    graph ``t`` on the host vertex sequence ``x``.
    """
    return packing(g, t, mode, x, max_vertices, node_budget)[0]


def packing(g, t, mode="vertex_disjoint", x=None, max_vertices=DEFAULT_PACKING_VERTICES,
            node_budget=DEFAULT_PACKING_NODES):
    """Like :func:`packing_number` but also returns a witness packing."""
    if g.n > max_vertices:
        raise SearchBudgetExceeded(f"host has {g.n} vertices, packing cap is {max_vertices}")
    if mode == "vertex_disjoint":
        if isinstance(t, RootedGraph):
            raise TypeError("vertex-disjoint packing takes an unrooted graph")
        if t.n == 0:
            raise ValueError("pattern must be nonempty")
        masks = set()
        for img in _Matcher(t, g, {}).embeddings():
            m = 0
            for y in img:
                m |= 1 << y
            masks.add(m)
        k, w = _max_disjoint(masks, node_budget)
        return k, [_bits(m) for m in w]
    if mode == "edge_disjoint_rooted":
        if not isinstance(t, RootedGraph):
            raise TypeError("edge-disjoint rooted packing takes a RootedGraph")
        if x is None:
            raise ValueError("edge_disjoint_rooted mode needs the root images x")
        index = {e: i for i, e in enumerate(g.sorted_edges)}
        cps = copies_on(t, g, x)
        masks = []
        for c in cps:
            m = 0
            for e in c.edges:
                m |= 1 << index[e]
            masks.append(m)
        if t.e == 0:
            return len(cps), [sorted(c.edges) for c in cps]
        k, w = _max_disjoint(masks, node_budget)
        edges = g.sorted_edges
        return k, [[edges[i] for i in _bits(m)] for m in w]
    raise ValueError(f"unknown packing mode {mode!r}")

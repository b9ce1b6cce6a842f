"""Canonical labelling and automorphism counting.

A small individualisation-refinement search in the style of nauty: equitable
colour refinement, branching on the first non-singleton cell, pruning
children by orbits of the automorphisms found so far (restricted to those
fixing the current prefix), and jumping back to the divergence point when a
leaf turns out equivalent to the first or best leaf.

The automorphism group order is the product of the orbit sizes of the
first-path vertices under the stabiliser chain, which the search recovers
exactly.

Rooted graphs are handled by giving each root its own singleton colour, in
root order, so root ordering is part of the isomorphism class.
"""

from __future__ import annotations

from functools import lru_cache

from .graphs import Graph, RootedGraph


_SMALL = 1 << 16
_TABLE = []


def _bits(mask):
    if mask < _SMALL:
        if not _TABLE:
            _TABLE.extend(_slow_bits(m) for m in range(_SMALL))
        return _TABLE[mask]
    return _slow_bits(mask)


def _slow_bits(mask):
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def _refine(cells, adj):
    while True:
        new = []
        for c in cells:
            if c & (c - 1) == 0:
                new.append(c)
                continue
            groups = {}
            for v in _bits(c):
                sig = tuple(map(int.bit_count, map(adj[v].__and__, cells)))
                groups[sig] = groups.get(sig, 0) | (1 << v)
            if len(groups) == 1:
                new.append(c)
            else:
                new.extend(groups[k] for k in sorted(groups))
        if len(new) == len(cells):
            return new
        cells = new


def _certificate(lab, adj):
    pos = [0] * len(lab)
    for i, v in enumerate(lab):
        pos[v] = i
    rows = []
    for v in lab:
        r = 0
        for u in _bits(adj[v]):
            r |= 1 << pos[u]
        rows.append(r)
    return tuple(rows)


class _Search:
    def __init__(self, n, adj, cells):
        self.n = n
        self.adj = adj
        self.gens = []
        self.first = None  # (path, lab, cert)
        self.best = None
        self._orbit_cache = {}
        self._visit(list(cells), [])

    # orbits of the subgroup generated by generators fixing ``prefix`` pointwise
    def _orbits(self, prefix):
        key = (tuple(prefix), len(self.gens))
        hit = self._orbit_cache.get(key)
        if hit is not None:
            return hit
        parent = list(range(self.n))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for g in self.gens:
            if any(g[x] != x for x in prefix):
                continue
            for x in range(self.n):
                a, b = find(x), find(g[x])
                if a != b:
                    parent[max(a, b)] = min(a, b)
        roots = [find(x) for x in range(self.n)]
        self._orbit_cache[key] = roots
        return roots

    def _leaf(self, cells, path):
        lab = [c.bit_length() - 1 for c in cells]
        cert = _certificate(lab, self.adj)
        if self.first is None:
            self.first = self.best = (list(path), lab, cert)
            return None
        for ref in (self.first, self.best):
            if cert == ref[2]:
                perm = [0] * self.n
                for a, b in zip(ref[1], lab):
                    perm[a] = b
                if any(perm[x] != x for x in range(self.n)):
                    self.gens.append(tuple(perm))
                d = 0
                rp = ref[0]
                while d < len(path) and d < len(rp) and path[d] == rp[d]:
                    d += 1
                return d
        if cert > self.best[2]:
            self.best = (list(path), lab, cert)
        return None

    def _visit(self, cells, path):
        cells = _refine(cells, self.adj)
        if len(cells) == self.n:
            return self._leaf(cells, path)
        depth = len(path)
        idx = next(i for i, c in enumerate(cells) if c & (c - 1))
        target = cells[idx]
        explored = []
        for v in _bits(target):
            if explored:
                orb = self._orbits(path)
                if any(orb[v] == orb[u] for u in explored):
                    continue
            explored.append(v)
            child = cells[:idx] + [1 << v, target ^ (1 << v)] + cells[idx + 1:]
            ret = self._visit(child, path + [v])
            if ret is not None and ret < depth:
                return ret
        return None

    def group_order(self):
        if self.first is None:
            return 1
        fp = self.first[0]
        order = 1
        for k, x in enumerate(fp):
            orb = self._orbits(fp[:k])
            order *= sum(1 for y in range(self.n) if orb[y] == orb[x])
        return order


def _initial_cells(n, colors):
    if n == 0:
        return []
    by = {}
    for v, c in enumerate(colors):
        by[c] = by.get(c, 0) | (1 << v)
    return [by[c] for c in sorted(by)]


def _color_signature(colors):
    counts = {}
    for c in colors:
        counts[c] = counts.get(c, 0) + 1
    return ",".join(f"{c}x{counts[c]}" for c in sorted(counts))


def _rows_to_hex(rows):
    n = len(rows)
    bits, k = 0, 0
    for j in range(1, n):
        for i in range(j):
            if rows[i] >> j & 1:
                bits |= 1 << k
            k += 1
    return format(bits, "x")


@lru_cache(maxsize=1 << 16)
def _canon(n, edges, colors):
    g = Graph._trusted(n, edges)
    cells = _initial_cells(n, colors)
    s = _Search(n, g.adj, cells)
    if s.best is None:
        lab, cert, order = [], (), 1
    else:
        lab, cert, order = s.best[1], s.best[2], s.group_order()
    return tuple(lab), cert, order, tuple(s.gens)


def _colors_for_rooted(r: RootedGraph):
    s = len(r.roots)
    colors = [s] * r.graph.n
    for i, w in enumerate(r.roots):
        colors[w] = i
    return tuple(colors)


def canonical_labeling(g, colors=None):
    """Return ``(lab, code)``: ``lab[i]`` is the vertex placed at canonical position i."""
    if isinstance(g, RootedGraph):
        colors, tag = _colors_for_rooted(g), f"r{len(g.roots)}"
        g = g.graph
    elif colors is None:
        colors, tag = (0,) * g.n, ""
    else:
        colors = tuple(colors)
        tag = "c" + _color_signature(colors)
    lab, cert, _, _ = _canon(g.n, g.edges, colors)
    code = f"{g.n}|{tag}|{_rows_to_hex(cert)}".encode()
    return list(lab), code


def _root_colors(n, roots):
    colors = [len(roots)] * n
    for i, w in enumerate(roots):
        colors[w] = i
    return tuple(colors)


def rooted_aut_of(g: Graph, roots) -> int:
    """rooted_aut_count of ``g`` with the given roots, skipping RootedGraph validation."""
    return _canon(g.n, g.edges, _root_colors(g.n, roots))[2]


def rooted_code(g: Graph, s: int) -> bytes:
    """canonical_form of ``g`` rooted at 0..s-1, skipping RootedGraph validation."""
    colors = tuple(range(s)) + (s,) * (g.n - s)
    cert = _canon(g.n, g.edges, colors)[1]
    return f"{g.n}|r{s}|{_rows_to_hex(cert)}".encode()


def canonical_form(g, colors=None) -> bytes:
    """Canonical code: equal for two (rooted, coloured) graphs iff they are isomorphic."""
    return canonical_labeling(g, colors)[1]


def canonical_graph(g: Graph) -> Graph:
    """The canonically relabelled copy of ``g``."""
    lab, _ = canonical_labeling(g)
    pos = [0] * g.n
    for i, v in enumerate(lab):
        pos[v] = i
    return g.relabel(pos)


def aut_count(g: Graph, colors=None) -> int:
    """|Aut(g)|, optionally restricted to colour-preserving permutations."""
    colors = (0,) * g.n if colors is None else tuple(colors)
    return _canon(g.n, g.edges, colors)[2]


def rooted_aut_count(r: RootedGraph) -> int:
    """|Aut(W, Z)|: automorphisms of the rooted graph fixing every root."""
    return _canon(r.graph.n, r.graph.edges, _colors_for_rooted(r))[2]


def automorphism_generators(g: Graph, colors=None):
    colors = (0,) * g.n if colors is None else tuple(colors)
    return list(_canon(g.n, g.edges, colors)[3])


def is_isomorphic(a, b) -> bool:
    return canonical_form(a) == canonical_form(b)


def cache_clear():
    _canon.cache_clear()

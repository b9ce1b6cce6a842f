"""Sunflowers, [W,Z]-trees, (X,[B,A])-components and the rooted forest count."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import reduce
from itertools import combinations

from .canon import canonical_form, rooted_aut_of, rooted_code
from .counting import copies_on
from .errors import BudgetExceeded, DomainError, PreconditionUnmet
from .graphs import Graph, RootedGraph

DEFAULT_SUNFLOWER_CAP = 12
DEFAULT_TREE_COPIES = 3
DEFAULT_TREE_BUDGET = 200_000


def _bits(mask):
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def _mask(vs):
    m = 0
    for v in vs:
        m |= 1 << v
    return m


def _components_in(adj, mask):
    comps = []
    rest = mask
    while rest:
        low = rest & -rest
        comp, frontier = low, low
        while frontier:
            nxt = 0
            for x in _bits(frontier):
                nxt |= adj[x] & mask
            frontier = nxt & ~comp
            comp |= nxt
        comps.append(comp)
        rest &= ~comp
    return comps


# sunflowers ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Sunflower:
    petals: tuple
    core: tuple
    mode: str  # "exact" or "heuristic"

    @property
    def k(self) -> int:
        return len(self.petals)


def _piece_type(g: Graph, piece: int, core: int):
    vs = _bits(piece)
    colors = [g.adj[x] & core for x in vs]
    return canonical_form(g.induced(vs), colors)


def _petal_system(g: Graph, pieces, core):
    groups = {}
    for pc in pieces:
        groups.setdefault(_piece_type(g, pc, core), []).append(pc)
    return groups


def max_sunflower(r: RootedGraph, cap: int = DEFAULT_SUNFLOWER_CAP):
    """Largest k with a k-sunflower in ``r``, and a witness.

    Fix the set C = Z minus the petals (W ⊆ C ⊊ Z).  Petals have no edges
    between them, so each is a union of components of J[Z minus C], and the
    petals are isomorphic over C exactly when every component type (a
    component together with its neighbourhood in C) is split evenly.  The
    best k for that C is therefore the gcd of the type multiplicities.
    """
    g = r.graph
    w = _mask(r.roots)
    rest = list(r.nonroots)
    if not rest:
        return 0, Sunflower((), tuple(r.roots), "exact")
    if len(rest) > cap:
        pieces = _components_in(g.adj, _mask(rest))
        groups = _petal_system(g, pieces, w)
        best = max(groups.values(), key=lambda grp: (len(grp), -min(grp)))
        petals = tuple(tuple(_bits(pc)) for pc in sorted(best))
        return len(petals), Sunflower(petals, _core_of(g, petals), "heuristic")
    best_k, best = 0, None
    for size in range(len(rest)):
        for extra in combinations(rest, size):
            core = w | _mask(extra)
            u = _mask(rest) & ~core
            groups = _petal_system(g, _components_in(g.adj, u), core)
            k = reduce(math.gcd, (len(grp) for grp in groups.values()))
            if k > best_k:
                petals = [0] * k
                for key in sorted(groups):
                    grp = sorted(groups[key])
                    step = len(grp) // k
                    for i in range(k):
                        for pc in grp[i * step:(i + 1) * step]:
                            petals[i] |= pc
                best_k = k
                best = tuple(sorted(tuple(_bits(p)) for p in petals))
    return best_k, Sunflower(best, _core_of(g, best), "exact")


def _core_of(g: Graph, petals):
    if not petals:
        return ()
    p = _mask(petals[0])
    nb = 0
    for x in petals[0]:
        nb |= g.adj[x]
    return tuple(_bits(nb & ~p))


def is_sunflower(r: RootedGraph, petals) -> bool:
    """Direct check of the definition for a proposed petal system."""
    g = r.graph
    rest = set(r.nonroots)
    seen = set()
    for p in petals:
        if not p or not set(p) <= rest or seen & set(p):
            return False
        seen |= set(p)
    for a, b in combinations(petals, 2):
        if any(g.has_edge(x, y) for x in a for y in b):
            return False
    core = [v for v in range(g.n) if v not in seen]
    codes = {canonical_form(RootedGraph.of(g, core, core + list(p))[0]) for p in petals}
    return len(codes) <= 1


# [W,Z]-trees -------------------------------------------------------------------------------


@dataclass(frozen=True)
class TreeCopy:
    image: tuple  # image[x] for x in Z (pattern labelling, roots first)
    edges: frozenset

    @property
    def vertices(self):
        return frozenset(self.image)


@dataclass(frozen=True)
class WZTree:
    """A union T of copies T_0, ..., T_m of [W, Z] on W; roots are 0..s-1."""

    graph: Graph
    s: int
    copies: tuple
    code: bytes

    @property
    def rooted(self) -> RootedGraph:
        return RootedGraph(self.graph, tuple(range(self.s)))

    @property
    def e_t(self) -> int:
        return self.graph.e

    @property
    def v_t(self) -> int:
        return self.graph.n - self.s

    def steps(self):
        """(Y_i, Z_i, v_i, e_i, aut(Y_i, Z_i)) for i >= 1."""
        out = []
        first = self.copies[0]
        pattern = Graph._trusted(len(first.image), first.edges)
        seen = set(first.image)
        for c in self.copies[1:]:
            zi = sorted(c.vertices)
            yi = sorted(set(zi) & seen)
            ym = _mask(yi)
            ei = sum(1 for a, b in c.edges if not (ym >> a & 1 and ym >> b & 1))
            # T_i is the image of the pattern, so aut(Y_i, Z_i) is a pattern aut with the preimage rooted
            pre = tuple(x for x in range(len(c.image)) if c.image[x] in seen)
            out.append((tuple(yi), tuple(zi), len(zi) - len(yi), ei, rooted_aut_of(pattern, pre)))
            seen |= set(zi)
        return out

    def is_valid(self) -> bool:
        union = set()
        for i, c in enumerate(self.copies):
            if i and not (c.edges & union and not c.edges <= union):
                return False
            union |= c.edges
        return union == set(self.graph.edges)


def _injections(rest, existing, fresh_start):
    """All maps of the pattern non-roots to existing non-roots (injective) or fresh vertices."""
    out = []
    k = len(rest)

    def rec(i, used, acc, nxt):
        if i == k:
            out.append(tuple(acc))
            return
        for y in existing:
            if not used >> y & 1:
                acc.append(y)
                rec(i + 1, used | (1 << y), acc, nxt)
                acc.pop()
        acc.append(nxt)
        rec(i + 1, used, acc, nxt + 1)
        acc.pop()

    rec(0, 0, [], fresh_start)
    return out


def generate_wz_trees(r: RootedGraph, max_copies: int = DEFAULT_TREE_COPIES, host_budget: int = DEFAULT_TREE_BUDGET):
    """Yield every [W,Z]-tree with at most ``max_copies`` copies, one per isomorphism class of T[W, V(T)].

    Trees are grown by gluing a new copy onto each class representative; the
    copy sequence kept is the first one found.  ``host_budget`` bounds the
    number of candidate gluings examined; exceeding it raises BudgetExceeded
    carrying the trees produced so far.
    """
    if r.v < 2 or r.e < 1:
        raise PreconditionUnmet("v(W,Z) >= 2 and e(W,Z) >= 1")
    base, _ = RootedGraph.of(r.graph, list(r.roots), range(r.graph.n))
    s, z = base.s, base.graph.n
    pat = sorted(base.graph.edges)
    rest = list(range(s, z))
    first = TreeCopy(tuple(range(z)), frozenset(pat))
    t0 = WZTree(base.graph, s, (first,), canonical_form(base))
    produced = [t0]
    yield t0
    level = [t0]
    work = 0
    seen = {t0.code}
    for _ in range(1, max_copies):
        nxt = []
        for t in level:
            union = set(t.graph.edges)
            existing = list(range(s, t.graph.n))
            local = set()
            for img_rest in _injections(rest, existing, t.graph.n):
                work += 1
                if work > host_budget:
                    raise BudgetExceeded(f"tree generation examined more than {host_budget} gluings", produced)
                img = tuple(range(s)) + img_rest
                es = frozenset((min(img[a], img[b]), max(img[a], img[b])) for a, b in pat)
                common = es & union
                if not common or common == es:
                    continue
                n_new = max(t.graph.n, max(img) + 1)
                key = (n_new, es - common)
                if key in local:
                    continue
                local.add(key)
                g = Graph._trusted(n_new, frozenset(union | es))
                code = rooted_code(g, s)
                if code in seen:
                    continue
                seen.add(code)
                tree = WZTree(g, s, t.copies + (TreeCopy(img, es),), code)
                produced.append(tree)
                nxt.append(tree)
                yield tree
        level = nxt


# components ----------------------------------------------------------------------------------


@dataclass(frozen=True)
class Component:
    copies: tuple
    vertices: frozenset
    edges: frozenset

    @property
    def tau(self) -> int:
        return len(self.copies)


def extract_components(h: Graph, r: RootedGraph, x):
    """(X,[B,A])-components: classes of copies linked by chains of shared edges."""
    cps = copies_on(r, h, x)
    parent = list(range(len(cps)))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    owner = {}
    for i, c in enumerate(cps):
        for e in c.edges:
            if e in owner:
                ra, rb = find(i), find(owner[e])
                if ra != rb:
                    parent[max(ra, rb)] = min(ra, rb)
            else:
                owner[e] = i
    groups = {}
    for i in range(len(cps)):
        groups.setdefault(find(i), []).append(cps[i])
    out = []
    for key in sorted(groups):
        grp = groups[key]
        out.append(Component(tuple(grp), frozenset().union(*(c.vertices for c in grp)),
                             frozenset().union(*(c.edges for c in grp))))
    return out


# forests ---------------------------------------------------------------------------------------


def forest_count(t: int, m: int) -> int:
    """Labelled forests on [t] with m trees, each containing exactly one of m given roots."""
    if not (isinstance(t, int) and isinstance(m, int)) or not 1 <= m <= t:
        raise DomainError(f"need 1 <= m <= t, got t={t}, m={m}")
    if m == t:
        return 1
    return m * t ** (t - m - 1)


def forest_count_brute(t: int, m: int) -> int:
    """Same count by enumerating edge sets of size t - m."""
    if not 1 <= m <= t:
        raise DomainError(f"need 1 <= m <= t, got t={t}, m={m}")
    pairs = list(combinations(range(t), 2))
    total = 0
    for es in combinations(pairs, t - m):
        parent = list(range(t))

        def find(a):
            while parent[a] != a:
                a = parent[a]
            return a

        ok = True
        for a, b in es:
            ra, rb = find(a), find(b)
            if ra == rb:
                ok = False
                break
            parent[ra] = rb
        if not ok:
            continue
        roots = {find(i) for i in range(m)}
        if len(roots) == m:
            total += 1
    return total

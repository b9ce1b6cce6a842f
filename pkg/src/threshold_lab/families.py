"""Named graph families for the command line."""

from __future__ import annotations

import re
from pathlib import Path

from . import graphs as G
from .enumeration import connected_graphs, random_sparse_hosts, trees
from .graph6 import read_graphs
from .numeric import parse_real


class Family(list):
    """A list of graphs plus provenance metadata."""

    def __init__(self, items=(), meta=None):
        super().__init__(items)
        self.meta = dict(meta or {})


_BUILTIN = re.compile(r"^(connected|trees|cliques|cycles|stars)\s*(\d+)$")
_RANDOM = re.compile(r"^random-sparse\((.*)\)$")


def load_family(name: str) -> Family:
    """Resolve a family name: a builtin name or a graph6/sparse6 file path.

    Builtins: ``connectedK`` (connected graphs on 2..K vertices, K <= 7),
    ``trees K`` (trees on exactly K vertices), ``cliques K`` (K_2..K_K),
    ``cycles K`` (C_3..C_K), ``stars K`` (K_{1,1}..K_{1,K}) and
    ``random-sparse(n, q, count, seed)``.
    """
    text = name.strip()
    m = _BUILTIN.match(text)
    if m:
        kind, k = m.group(1), int(m.group(2))
        if kind == "connected":
            if k > 7:
                raise ValueError("connectedK supports K <= 7")
            gs = connected_graphs(k)
        elif kind == "trees":
            gs = trees(k)
        elif kind == "cliques":
            gs = [G.complete(i) for i in range(2, k + 1)]
        elif kind == "cycles":
            gs = [G.cycle(i) for i in range(3, k + 1)]
        else:
            gs = [G.star(i) for i in range(1, k + 1)]
        return Family(gs, {"family": f"{kind} {k}"})
    m = _RANDOM.match(text)
    if m:
        parts = [x.strip() for x in m.group(1).split(",")]
        if len(parts) != 4:
            raise ValueError("random-sparse takes (n, q, count, seed)")
        n, q, count, seed = int(parts[0]), parse_real(parts[1]), int(parts[2]), int(parts[3])
        gs, rejected = random_sparse_hosts(n, q, count, seed)
        return Family(gs, {"family": "random-sparse", "n": n, "q": parts[1], "count": count, "seed": seed,
                           "rejected": rejected})
    path = Path(text)
    if not path.exists():
        raise FileNotFoundError(f"no such family or file: {name}")
    return Family(read_graphs(path), {"family": "file", "path": str(path)})

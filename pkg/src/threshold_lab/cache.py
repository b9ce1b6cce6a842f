"""On-disk memo for subgraph censuses, enabled by THRESHOLD_LAB_CACHE.

The cache only ever returns what the computation would return; a corrupt
or unreadable entry is ignored and recomputed.
"""

from __future__ import annotations

import hashlib
import json
import os
from pathlib import Path

from .counting import DEFAULT_CENSUS_EDGES, Census, CensusEntry, subgraph_census
from .graph6 import parse_graph6, write_graph6

ENV = "THRESHOLD_LAB_CACHE"
FORMAT = 1


def cache_dir():
    d = os.environ.get(ENV)
    return Path(d) if d else None


def _key(h, max_edges):
    raw = f"census|{FORMAT}|{write_graph6(h)}|{max_edges}".encode()
    return hashlib.sha256(raw).hexdigest()


def cached_census(h, max_edges: int = DEFAULT_CENSUS_EDGES) -> Census:
    d = cache_dir()
    if d is None:
        return subgraph_census(h, max_edges)
    path = d / "census" / (_key(h, max_edges) + ".json")
    try:
        rows = json.loads(path.read_text())
        entries = tuple(CensusEntry(r[0].encode(), parse_graph6(r[1]), r[2], r[3]) for r in rows)
        return Census(h, entries)
    except (OSError, ValueError, KeyError, IndexError, TypeError):
        pass
    census = subgraph_census(h, max_edges)
    rows = [[x.code.decode(), write_graph6(x.graph), x.copies, x.aut] for x in census]
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_suffix(f".{os.getpid()}.tmp")
    tmp.write_text(json.dumps(rows))
    os.replace(tmp, path)
    return census

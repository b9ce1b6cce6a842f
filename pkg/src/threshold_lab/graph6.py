"""graph6 / sparse6 encoding (the nauty formats)."""

from __future__ import annotations

from pathlib import Path

from .errors import MalformedGraph6
from .graphs import Graph

_MAX_N = 68719476735


def _encode_n(n: int) -> list:
    if n < 0 or n > _MAX_N:
        raise ValueError(f"cannot encode {n} vertices")
    if n <= 62:
        return [n + 63]
    if n <= 258047:
        return [126] + [((n >> s) & 63) + 63 for s in (12, 6, 0)]
    return [126, 126] + [((n >> s) & 63) + 63 for s in (30, 24, 18, 12, 6, 0)]


def _decode_n(data: bytes, pos: int):
    def need(k):
        if len(data) < pos + k:
            raise MalformedGraph6("truncated vertex count", len(data))

    need(1)
    if data[pos] != 126:
        return data[pos] - 63, pos + 1
    need(2)
    if data[pos + 1] != 126:
        need(4)
        chunk, width, start = data[pos + 1:pos + 4], 3, pos + 1
    else:
        need(8)
        chunk, width, start = data[pos + 2:pos + 8], 6, pos + 2
    n = 0
    for i, c in enumerate(chunk):
        if not 63 <= c <= 126:
            raise MalformedGraph6("bad byte in vertex count", start + i)
        n = (n << 6) | (c - 63)
    return n, start + width


def _check_bytes(data: bytes, start: int):
    for i in range(start, len(data)):
        if not 63 <= data[i] <= 126:
            raise MalformedGraph6(f"byte {data[i]!r} outside 63..126", i)


def write_graph6(g: Graph, header: bool = False) -> str:
    out = _encode_n(g.n)
    bits = []
    for j in range(1, g.n):
        aj = g.adj[j]
        for i in range(j):
            bits.append(aj >> i & 1)
    while len(bits) % 6:
        bits.append(0)
    for k in range(0, len(bits), 6):
        v = 0
        for b in bits[k:k + 6]:
            v = (v << 1) | b
        out.append(v + 63)
    s = bytes(out).decode("ascii")
    return (">>graph6<<" + s) if header else s


def parse_graph6(text) -> Graph:
    data = text.encode("ascii") if isinstance(text, str) else bytes(text)
    data = data.rstrip(b"\r\n")
    pos = 0
    if data.startswith(b">>graph6<<"):
        pos = 10
    if data[pos:pos + 1] == b":":
        raise MalformedGraph6("sparse6 string passed to graph6 parser", pos)
    n, pos = _decode_n(data, pos)
    _check_bytes(data, pos)
    nbits = n * (n - 1) // 2
    nbytes = (nbits + 5) // 6
    if len(data) - pos < nbytes:
        raise MalformedGraph6(f"expected {nbytes} data bytes, found {len(data) - pos}", len(data))
    if len(data) - pos > nbytes:
        raise MalformedGraph6("trailing bytes after graph", pos + nbytes)
    edges = []
    k = 0
    for j in range(1, n):
        for i in range(j):
            byte = data[pos + k // 6] - 63
            if byte >> (5 - k % 6) & 1:
                edges.append((i, j))
            k += 1
    return Graph(n, edges)


def write_sparse6(g: Graph, header: bool = False) -> str:
    n = g.n
    k = max(1, (n - 1).bit_length()) if n > 1 else 0
    if n == 1:
        k = 0
    bits = []

    def put(b, x):
        bits.append(b)
        for s in range(k - 1, -1, -1):
            bits.append(x >> s & 1)

    v = 0
    for x, y in sorted(g.edges, key=lambda e: (e[1], e[0])):
        if y == v:
            put(0, x)
        elif y == v + 1:
            put(1, x)
            v += 1
        else:
            put(1, y)
            put(0, x)
            v = y
    pad = (-len(bits)) % 6
    if k < 6 and n == (1 << k) and v == n - 2 and pad >= k + 1:
        bits.append(0)
        pad -= 1
    bits.extend([1] * pad)
    out = [ord(":")] + _encode_n(n)
    for i in range(0, len(bits), 6):
        c = 0
        for b in bits[i:i + 6]:
            c = (c << 1) | b
        out.append(c + 63)
    s = bytes(out).decode("ascii")
    return (">>sparse6<<" + s) if header else s


def parse_sparse6(text) -> Graph:
    data = text.encode("ascii") if isinstance(text, str) else bytes(text)
    data = data.rstrip(b"\r\n")
    pos = 0
    if data.startswith(b">>sparse6<<"):
        pos = 11
    if data[pos:pos + 1] != b":":
        raise MalformedGraph6("sparse6 string must start with ':'", pos)
    n, pos = _decode_n(data, pos + 1)
    _check_bytes(data, pos)
    k = (n - 1).bit_length() if n > 1 else 0
    bits = []
    for c in data[pos:]:
        c -= 63
        bits.extend((c >> s) & 1 for s in range(5, -1, -1))
    edges = set()
    v = 0
    i = 0
    while i + 1 + k <= len(bits):
        b = bits[i]
        x = 0
        for t in bits[i + 1:i + 1 + k]:
            x = (x << 1) | t
        i += 1 + k
        if b:
            v += 1
        if v >= n:
            break
        if x > v:
            v = x
        else:
            if x >= n:
                raise MalformedGraph6("edge endpoint out of range", pos + i // 6)
            if x != v:
                edges.add((x, v))
    return Graph(n, edges)


def parse_any(text) -> Graph:
    s = text.strip() if isinstance(text, str) else bytes(text).strip()
    lead = s[:1] if isinstance(s, bytes) else s[:1].encode()
    if lead == b":" or (s[:11] in (">>sparse6<<", b">>sparse6<<")):
        return parse_sparse6(s)
    return parse_graph6(s)


def read_graphs(path) -> list:
    """One graph per line, graph6 or sparse6; blank lines and ``#`` comments skipped."""
    graphs = []
    for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        try:
            graphs.append(parse_any(line))
        except MalformedGraph6 as exc:
            raise MalformedGraph6(f"line {lineno}: {exc.args[0]}", exc.offset) from None
    return graphs


def write_graphs(path, graphs, sparse: bool = False):
    enc = write_sparse6 if sparse else write_graph6
    Path(path).write_text("".join(enc(g) + "\n" for g in graphs))

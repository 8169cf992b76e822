"""Text formats: graph6, edge-list and bipartite-edge-list.

edge-list::

    4
    1 2
    2 3

bipartite-edge-list adds a second header line naming the top part::

    4
    top: 1 3
    1 2
    3 4

All serializers are byte-deterministic (edges sorted, single spaces, trailing
newline).  Graphs whose labels are not ``1..n`` are written positionally.
"""

from __future__ import annotations

import re

from .errors import ArgumentError, InvariantError, ParseError
from .graph import BipartiteGraph, Graph, as_graph, iter_bits

FORMATS = ("graph6", "edge-list", "bipartite-edge-list")

_G6_HEADER = ">>graph6<<"


def _g6_size(n: int) -> bytes:
    if n < 0:
        raise ArgumentError("negative vertex count")
    if n <= 62:
        return bytes([n + 63])
    if n <= 258047:
        return bytes([126] + [((n >> s) & 63) + 63 for s in (12, 6, 0)])
    if n <= 68719476735:
        return bytes([126, 126] + [((n >> s) & 63) + 63 for s in (30, 24, 18, 12, 6, 0)])
    raise ArgumentError("graph too large for graph6")


def to_graph6(g: Graph | BipartiteGraph) -> bytes:
    g = as_graph(g)
    verts = g.vertices
    n = len(verts)
    out = bytearray(_g6_size(n))
    acc = nbits = 0
    for j in range(1, n):
        row = g.row(verts[j])
        for i in range(j):
            acc = (acc << 1) | (row >> verts[i] & 1)
            nbits += 1
            if nbits == 6:
                out.append(acc + 63)
                acc = nbits = 0
    if nbits:
        out.append((acc << (6 - nbits)) + 63)
    return bytes(out)


def from_graph6(data: bytes | str) -> Graph:
    if isinstance(data, str):
        data = data.encode("ascii", errors="replace")
    data = data.rstrip(b"\r\n")
    pos = 0
    if data.startswith(_G6_HEADER.encode()):
        pos = len(_G6_HEADER)
    body = data[pos:]
    if not body:
        raise ParseError("empty graph6 string", pos)
    for i, b in enumerate(body):
        if not 63 <= b <= 126:
            raise ParseError(f"byte {b!r} outside the graph6 range", pos + i)
    if body[0] != 126:
        n, hdr = body[0] - 63, 1
    elif len(body) >= 2 and body[1] == 126:
        if len(body) < 8:
            raise ParseError("truncated 8-byte size header", pos + len(body))
        n, hdr = 0, 8
        for b in body[2:8]:
            n = (n << 6) | (b - 63)
    else:
        if len(body) < 4:
            raise ParseError("truncated 4-byte size header", pos + len(body))
        n, hdr = 0, 4
        for b in body[1:4]:
            n = (n << 6) | (b - 63)
    nbits = n * (n - 1) // 2
    need = (nbits + 5) // 6
    payload = body[hdr:]
    if len(payload) != need:
        raise ParseError(f"expected {need} adjacency bytes, found {len(payload)}",
                         pos + hdr + min(len(payload), need))
    rows = {v: 0 for v in range(1, n + 1)}
    k = 0
    for j in range(1, n):
        for i in range(j):
            byte = payload[k // 6] - 63
            if byte >> (5 - k % 6) & 1:
                rows[i + 1] |= 1 << (j + 1)
                rows[j + 1] |= 1 << (i + 1)
            k += 1
    if nbits % 6:
        pad = (payload[-1] - 63) & ((1 << (6 - nbits % 6)) - 1)
        if pad:
            raise ParseError("non-zero padding bits", pos + hdr + need - 1)
    return Graph.from_rows(rows)


def _lines_with_offsets(text: str):
    offset = 0
    for line in text.splitlines(keepends=True):
        yield offset, line.rstrip("\r\n")
        offset += len(line.encode())


def _parse_int(tok: str, offset: int) -> int:
    try:
        return int(tok)
    except ValueError:
        raise ParseError(f"expected an integer, got {tok!r}", offset) from None


def _tokens(line: str, off: int) -> list[tuple[str, int]]:
    """Whitespace-separated tokens with their byte offsets."""
    return [(m.group(), off + len(line[:m.start()].encode())) for m in re.finditer(r"\S+", line)]


def _parse_edges(lines, n: int):
    edges = []
    for off, line in lines:
        if not line.strip():
            continue
        toks = _tokens(line, off)
        if len(toks) != 2:
            raise ParseError(f"edge line must have two vertices: {line!r}", off)
        u, v = (_parse_int(t, o) for t, o in toks)
        for w, (_, o) in zip((u, v), toks):
            if not 1 <= w <= n:
                raise ParseError(f"vertex {w} outside 1..{n}", o)
        if u == v:
            raise ParseError(f"loop at vertex {u}", off)
        edges.append((u, v))
    return edges


def from_edge_list(text: str) -> Graph:
    lines = list(_lines_with_offsets(text))
    if not lines:
        raise ParseError("missing vertex-count header", 0)
    off, head = lines[0]
    n = _parse_int(head.strip(), off)
    if n < 0:
        raise ParseError("negative vertex count", off)
    return Graph.on(n, _parse_edges(lines[1:], n))


def from_bipartite_edge_list(text: str) -> BipartiteGraph:
    lines = list(_lines_with_offsets(text))
    if len(lines) < 2:
        raise ParseError("missing 'top:' header line", len(text.encode()))
    off, head = lines[0]
    n = _parse_int(head.strip(), off)
    off, top_line = lines[1]
    if not top_line.startswith("top:"):
        raise ParseError("second line must start with 'top:'", off)
    top = []
    for tok, o in _tokens(top_line[4:], off + 4):
        t = _parse_int(tok, o)
        if not 1 <= t <= n:
            raise ParseError(f"top vertex {t} outside 1..{n}", o)
        top.append(t)
    g = Graph.on(n, _parse_edges(lines[2:], n))
    return BipartiteGraph(g, top)


def to_edge_list(g: Graph | BipartiteGraph) -> str:
    gg = as_graph(g).normalized()
    out = [str(gg.n)]
    out += [f"{u} {v}" for u, v in gg.edges()]
    return "\n".join(out) + "\n"


def to_bipartite_edge_list(g: BipartiteGraph) -> str:
    if not isinstance(g, BipartiteGraph):
        raise ArgumentError("bipartite-edge-list needs a BipartiteGraph")
    pos = {v: i for i, v in enumerate(g.vertices, 1)}
    top = " ".join(str(pos[v]) for v in iter_bits(g.top))
    body = to_edge_list(g).split("\n", 1)
    return f"{body[0]}\ntop:{' ' + top if top else ''}\n{body[1]}"


def parse_graph(text: str | bytes, fmt: str):
    """Parse ``text`` in one of :data:`FORMATS`."""
    if fmt == "graph6":
        return from_graph6(text)
    if isinstance(text, bytes):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError("input is not UTF-8 text", exc.start) from None
    if fmt == "edge-list":
        return from_edge_list(text)
    if fmt == "bipartite-edge-list":
        return from_bipartite_edge_list(text)
    raise ArgumentError(f"unknown format {fmt!r}; expected one of {FORMATS}")


def serialize_graph(g, fmt: str) -> bytes:
    if fmt == "graph6":
        return to_graph6(g)
    if fmt == "edge-list":
        return to_edge_list(g).encode()
    if fmt == "bipartite-edge-list":
        return to_bipartite_edge_list(g).encode()
    raise ArgumentError(f"unknown format {fmt!r}; expected one of {FORMATS}")


def detect_format(data: bytes) -> str:
    """Guess the format of a file: bipartite if it has a 'top:' line, edge-list if
    the first line is a bare integer, otherwise graph6."""
    lines = data.splitlines()
    if len(lines) >= 2 and lines[1].startswith(b"top:"):
        return "bipartite-edge-list"
    if lines and lines[0].strip().isdigit():
        return "edge-list"
    return "graph6"


__all__ = ["FORMATS", "parse_graph", "serialize_graph", "to_graph6", "from_graph6",
           "to_edge_list", "from_edge_list", "to_bipartite_edge_list",
           "from_bipartite_edge_list", "detect_format", "InvariantError"]

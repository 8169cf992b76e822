"""Whole-graph descriptions by repeatedly peeling a functional vertex.

A vertex ``y`` is functional over ``(U, R)`` when, for every vertex ``z``
outside ``{y} | U | R``, the bit ``m(y, z)`` is a fixed Boolean function of
``(m(x1, z), ..., m(xk, z))`` with ``U = [x1..xk]``.  Recording ``y``, the
entries of ``U`` and ``R`` with their adjacency bits, and the truth table of
that function describes every edge at ``y``; deleting ``y`` and recursing
describes the whole graph.
"""

from __future__ import annotations

import math
import struct
from dataclasses import dataclass
from itertools import combinations
from typing import Callable, Optional

from .errors import ArgumentError, MalformedWordError, NotInClassError
from .graph import BipartiteGraph, Graph, as_graph, bits_to_list, iter_bits

MAGIC = b"HENC"
VERSION = 1
DEFAULT_MAX_C = 3


@dataclass(frozen=True)
class FunctionalWitness:
    y: int
    U: tuple[int, ...]
    R: tuple[int, ...]
    table: tuple[int, ...]  # length 2 ** len(U)

    def pattern(self, g: Graph, z: int) -> int:
        return sum((g.row(x) >> z & 1) << i for i, x in enumerate(self.U))

    def violations(self, g) -> list[int]:
        """Vertices ``z`` on which the recorded function disagrees with ``m(y, z)``."""
        g = as_graph(g)
        skip = {self.y, *self.U, *self.R}
        return [z for z in g.vertices
                if z not in skip and self.table[self.pattern(g, z)] != (g.row(self.y) >> z & 1)]

    def is_valid(self, g, c: int | None = None) -> bool:
        if c is not None and (len(self.U) > c or len(self.R) > c):
            return False
        if len(set(self.U) | set(self.R) | {self.y}) != len(self.U) + len(self.R) + 1:
            return False
        return len(self.table) == 1 << len(self.U) and not self.violations(g)


@dataclass(frozen=True)
class DeltaPair:
    x: int
    y: int
    delta: tuple[int, ...]

    def to_witness(self) -> FunctionalWitness:
        rest = tuple(v for v in self.delta if v not in (self.x, self.y))
        return FunctionalWitness(self.y, (self.x,), rest, (0, 1))


def _table_for(g: Graph, y: int, U: tuple[int, ...], outside: int) -> Optional[tuple[int, ...]]:
    table = [None] * (1 << len(U))
    yrow = g.row(y)
    rows = [g.row(x) for x in U]
    for z in iter_bits(outside):
        idx = 0
        for i, r in enumerate(rows):
            idx |= (r >> z & 1) << i
        bit = yrow >> z & 1
        if table[idx] is None:
            table[idx] = bit
        elif table[idx] != bit:
            return None
    return tuple(0 if t is None else t for t in table)


def find_functional_witness(g, c: int, max_c: int = DEFAULT_MAX_C) -> Optional[FunctionalWitness]:
    """Least witness with ``|U|, |R| <= c``.

    Candidates are ordered by ``|U| + |R|``, then ``y``, then ``|U|``, then ``R``
    and ``U`` lexicographically.
    """
    if c < 0:
        raise ArgumentError("c must be non-negative")
    if c > max_c:
        raise ArgumentError(f"c={c} exceeds the search cap {max_c}; pass max_c to override")
    g = as_graph(g)
    verts = g.vertices
    full = g.vertex_mask
    for total in range(0, 2 * c + 1):
        for y in verts:
            others = [v for v in verts if v != y]
            for ku in range(max(0, total - c), min(c, total) + 1):
                kr = total - ku
                for R in combinations(others, kr):
                    rmask = sum(1 << v for v in R)
                    pool = [v for v in others if not rmask >> v & 1]
                    for U in combinations(pool, ku):
                        outside = full & ~rmask & ~(1 << y) & ~sum(1 << v for v in U)
                        table = _table_for(g, y, U, outside)
                        if table is not None:
                            return FunctionalWitness(y, U, R, table)
    return None


def symmetric_difference(g, x: int, y: int) -> int:
    g = as_graph(g)
    return g.row(x) ^ g.row(y)


def find_delta_pair(g, c: int, same_part: bool = False) -> Optional[DeltaPair]:
    """Least pair ``x < y`` with ``|N(x) ^ N(y)| <= c``.

    With ``same_part`` (bipartite input) only pairs inside one part qualify.
    """
    if c < 0:
        raise ArgumentError("c must be non-negative")
    bip = g if isinstance(g, BipartiteGraph) else None
    if same_part and bip is None:
        raise ArgumentError("same_part needs a BipartiteGraph")
    gg = as_graph(g)
    verts = gg.vertices
    for i, x in enumerate(verts):
        rx = gg.row(x)
        for y in verts[i + 1:]:
            if same_part and bip.side(x) != bip.side(y):
                continue
            d = rx ^ gg.row(y)
            if d.bit_count() <= c:
                return DeltaPair(x, y, tuple(bits_to_list(d)))
    return None


# ---------------------------------------------------------------------------
# codec
# ---------------------------------------------------------------------------

def _w(n: int) -> int:
    return math.ceil(math.log2(n)) if n > 1 else 0


def functional_bound(n: int, c: int) -> int:
    return (2 * c + 1) * n * _w(n) + ((1 << c) + 2 * c) * n


def _check_labels(g: Graph) -> None:
    if g.vertices != tuple(range(1, g.n + 1)):
        raise ArgumentError("the functional codec expects vertex set {1..n}")


def encode_functional(g, c: int, finder: Callable | None = None) -> str:
    """Bit string: one fixed-width record per peeled vertex, then the last edge bit.

    Each record is ``y``, exactly ``c`` entries for ``R`` and ``c`` for ``U``
    (label plus adjacency bit, unused slots repeat ``y`` with bit 0), then a
    ``2**c``-bit truth table.  Labels use ``ceil(log2 n)`` bits of the original n.
    """
    g = as_graph(g)
    _check_labels(g)
    finder = finder or find_functional_witness
    n = g.n
    w = _w(n)
    out = []

    def lab(v: int) -> str:
        return format(v - 1, f"0{w}b") if w else ""

    h = g
    while h.n > 2:
        wit = finder(h, c)
        if wit is None:
            raise NotInClassError(f"no functional vertex with c={c} in a residual graph on "
                                  f"{list(h.vertices)}", residual=h)
        if len(wit.U) > c or len(wit.R) > c or not wit.is_valid(h):
            raise ArgumentError("finder returned an invalid witness")
        y = wit.y
        rec = [lab(y)]
        for group in (wit.R, wit.U):
            for v in group:
                rec.append(lab(v) + str(h.row(y) >> v & 1))
            rec.extend([lab(y) + "0"] * (c - len(group)))
        rec.append("".join(str(t) for t in wit.table).ljust(1 << c, "0"))
        out.append("".join(rec))
        h = h.induced(h.vertex_mask & ~(1 << y))
    if h.n == 2:
        a, b = h.vertices
        out.append(str(h.row(a) >> b & 1))
    return "".join(out)


def decode_functional(bits: str, c: int, n: int) -> Graph:
    if set(bits) - {"0", "1"}:
        raise MalformedWordError("symbols other than 0/1", next(i for i, ch in enumerate(bits) if ch not in "01"))
    if n < 0 or c < 0:
        raise ArgumentError("n and c must be non-negative")
    w = _w(n)
    steps = max(0, n - 2)
    rec_len = (2 * c + 1) * w + 2 * c + (1 << c)
    expected = steps * rec_len + (1 if n >= 2 else 0)
    if len(bits) != expected:
        raise MalformedWordError(f"expected {expected} bits for n={n}, c={c}, found {len(bits)}",
                                 min(len(bits), expected))
    pos = 0

    def read(k: int) -> int:
        nonlocal pos
        s = bits[pos:pos + k]
        pos += k
        return int(s, 2) if s else 0

    records = []
    removed = 0
    for _ in range(steps):
        start = pos
        y = read(w) + 1
        if y > n or removed >> y & 1:
            raise MalformedWordError(f"peeled vertex {y} out of range or repeated", start)
        groups = []
        for _g in range(2):
            entries = []
            for _i in range(c):
                epos = pos
                v = read(w) + 1
                bit = read(1)
                if v == y:
                    if bit:
                        raise MalformedWordError("padding entry with a set adjacency bit", epos)
                    continue
                if v > n or removed >> v & 1:
                    raise MalformedWordError(f"entry {v} is not in the residual graph", epos)
                entries.append((v, bit))
            groups.append(entries)
        table = [read(1) for _ in range(1 << c)]
        records.append((y, groups[0], groups[1], table))
        removed |= 1 << y
    rows = {v: 0 for v in range(1, n + 1)}
    rest = [v for v in range(1, n + 1) if not removed >> v & 1]
    if len(rest) == 2 and read(1):
        a, b = rest
        rows[a] |= 1 << b
        rows[b] |= 1 << a
    alive = sum(1 << v for v in rest)
    for y, R, U, table in reversed(records):
        explicit = {v: b for v, b in R + U}
        if len(explicit) != len(R) + len(U):
            raise MalformedWordError("vertex listed twice in one record", 0)
        ulist = [v for v, _ in U]
        for z in iter_bits(alive):
            if z in explicit:
                bit = explicit[z]
            else:
                idx = sum((rows[x] >> z & 1) << i for i, x in enumerate(ulist))
                bit = table[idx]
            if bit:
                rows[y] |= 1 << z
                rows[z] |= 1 << y
        alive |= 1 << y
    return Graph.from_rows(rows)


def to_hex(bits: str, n: int, c: int) -> str:
    """Serialize with a 16-byte header: magic, version, c, n, bit count."""
    nbytes = (len(bits) + 7) // 8
    payload = int(bits, 2).to_bytes(nbytes, "big") if bits else b""
    if len(bits) % 8:
        payload = (int(bits, 2) << (8 - len(bits) % 8)).to_bytes(nbytes, "big")
    return (MAGIC + struct.pack(">HHII", VERSION, c, n, len(bits)) + payload).hex()


def from_hex(text: str) -> tuple[str, int, int]:
    """Inverse of :func:`to_hex`; returns ``(bits, n, c)``."""
    try:
        raw = bytes.fromhex(text.strip())
    except ValueError:
        raise MalformedWordError("not a hex string", 0) from None
    if len(raw) < 16 or raw[:4] != MAGIC:
        raise MalformedWordError("missing functional-code header", 0)
    version, c, n, nbits = struct.unpack(">HHII", raw[4:16])
    if version != VERSION:
        raise MalformedWordError(f"unsupported version {version}", 4)
    payload = raw[16:]
    if len(payload) != (nbits + 7) // 8:
        raise MalformedWordError("payload length does not match the header", 16)
    value = int.from_bytes(payload, "big") if payload else 0
    if nbits % 8:
        if value & ((1 << (8 - nbits % 8)) - 1):
            raise MalformedWordError("non-zero padding bits", 16 + len(payload) - 1)
        value >>= 8 - nbits % 8
    return (format(value, f"0{nbits}b") if nbits else ""), n, c

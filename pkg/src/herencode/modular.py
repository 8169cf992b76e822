"""Modular decomposition and the ternary tree codec built on top of it.

Word layout (alphabet ``0``, ``1``, ``|``)::

    bin(n) "|" record*

records appear in depth-first pre-order.  A leaf record is ``0`` followed by
``j - 1`` in exactly ``ceil(log2 n)`` bits.  An internal record is ``1``, then
``bin(k) "|"`` for its ``k`` children, then the prime codec's bits for the
node's quotient followed by ``|``.  Parallel and series nodes store ``O_k`` and
``K_k`` as their quotient, so the decoder needs no separate node-kind symbol.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

from .errors import ArgumentError, MalformedWordError, UnsupportedPrimeError
from .graph import Graph, as_graph, bits_to_list, iter_bits
from .recognition import distinguishers, module_closure

PARALLEL, SERIES, PRIME, LEAF = "parallel", "series", "prime", "leaf"


@dataclass
class MDNode:
    kind: str
    vertices: int  # bitmask
    children: list["MDNode"] = field(default_factory=list)
    quotient: Optional[Graph] = None
    label: Optional[int] = None

    @property
    def min_label(self) -> int:
        return (self.vertices & -self.vertices).bit_length() - 1

    def leaves(self) -> list[int]:
        return bits_to_list(self.vertices)

    def __eq__(self, other) -> bool:
        return (isinstance(other, MDNode) and self.kind == other.kind
                and self.vertices == other.vertices and self.label == other.label
                and self.quotient == other.quotient and self.children == other.children)

    def walk(self):
        yield self
        for c in self.children:
            yield from c.walk()

    def to_json(self) -> dict:
        if self.kind == LEAF:
            return {"kind": LEAF, "vertex": self.label}
        out = {"kind": self.kind, "children": [c.to_json() for c in self.children]}
        if self.kind == PRIME:
            out["quotient_edges"] = self.quotient.edges()
        return out


def _complete(k: int) -> Graph:
    full = (1 << (k + 1)) - 2
    return Graph.from_rows({v: full & ~(1 << v) for v in range(1, k + 1)})


def _empty(k: int) -> Graph:
    return Graph.from_rows({v: 0 for v in range(1, k + 1)})


def quotient(g: Graph, partition) -> Graph:
    """Contract each part (a module) to one vertex; parts numbered ``1..k`` in the given order."""
    g = as_graph(g)
    masks = [p if isinstance(p, int) else sum(1 << v for v in p) for p in partition]
    union = 0
    for m in masks:
        if not m or m & union:
            raise ArgumentError("parts must be non-empty and pairwise disjoint")
        union |= m
    if union != g.vertex_mask:
        raise ArgumentError("parts must cover the vertex set")
    for m in masks:
        d = distinguishers(g, m)
        if d:
            raise ArgumentError(f"part {bits_to_list(m)} is not a module: vertex {bits_to_list(d)[0]} "
                                "distinguishes it")
    reps = [(m & -m).bit_length() - 1 for m in masks]
    rows = {}
    for i, r in enumerate(reps, 1):
        row = 0
        for j, m in enumerate(masks, 1):
            if j != i and g.row(r) & m:
                row |= 1 << j
        rows[i] = row
    return Graph.from_rows(rows)


def _maximal_modules(g: Graph, mask: int) -> list[int]:
    """Maximal proper modules of a connected, co-connected graph on ``mask``.

    They partition the vertex set, and two vertices share one exactly when the
    module closure of the pair is proper.  Modules are found one at a time from
    the least unassigned vertex; a closure that reaches an already finished
    module must be the whole vertex set, so it is abandoned early.
    """
    rows = {v: g.row(v) & mask for v in iter_bits(mask)}
    done = 0
    found = []
    while done != mask:
        rest = mask & ~done
        u = (rest & -rest).bit_length() - 1
        module = 1 << u
        for x in iter_bits(rest & ~(1 << u)):
            if module >> x & 1:
                continue
            s = module | (1 << x)
            anyn, alln = 0, mask
            frontier = s
            while frontier:
                for v in iter_bits(frontier):
                    r = rows[v]
                    anyn |= r
                    alln &= r
                frontier = anyn & ~alln & ~s
                s |= frontier
                if s & done:
                    break
            if not s & done and s != mask:
                module = s
        found.append(module)
        done |= module
    return sorted(found, key=lambda m: m & -m)


def _decompose(g: Graph, mask: int) -> MDNode:
    if mask & (mask - 1) == 0:
        return MDNode(LEAF, mask, label=mask.bit_length() - 1)
    h = g.induced(mask)
    comps = h.components()
    if len(comps) > 1:
        kind, parts = PARALLEL, comps
    else:
        cocomps = h.complement().components()
        if len(cocomps) > 1:
            kind, parts = SERIES, cocomps
        else:
            kind, parts = PRIME, _maximal_modules(g, mask)
    parts = sorted(parts, key=lambda m: m & -m)
    children = [_decompose(g, p) for p in parts]
    if kind == PARALLEL:
        q = _empty(len(parts))
    elif kind == SERIES:
        q = _complete(len(parts))
    else:
        q = quotient(h, parts)
    return MDNode(kind, mask, children, q)


def decompose(g) -> MDNode:
    """Canonical modular decomposition tree; children ordered by minimum label."""
    g = as_graph(g)
    if g.n == 0:
        raise ArgumentError("cannot decompose the empty graph")
    return _decompose(g, g.vertex_mask)


# ---------------------------------------------------------------------------
# prime codecs
# ---------------------------------------------------------------------------

class PrimeCodec:
    """Interface for codecs of prime (or complete, or empty) quotient graphs."""

    name = "abstract"

    def accepts(self, q: Graph) -> bool:
        return True

    def encode(self, q: Graph) -> str:
        raise NotImplementedError

    def decode(self, bits: str, k: int) -> Graph:
        raise NotImplementedError

    def bound(self, graphs) -> float:
        """Least ``c`` with ``len(encode(Q)) <= c * k * log2 k`` over ``graphs`` (k >= 2)."""
        c = 0.0
        for q in graphs:
            if q.n >= 2:
                c = max(c, len(self.encode(q)) / (q.n * math.log2(q.n)))
        return c


class NaivePrimeCodec(PrimeCodec):
    """Upper-triangle adjacency bits, row by row (the vertex count comes from the record)."""

    name = "naive"

    def encode(self, q: Graph) -> str:
        k = q.n
        return "".join("1" if q.row(i) >> j & 1 else "0"
                       for i in range(1, k + 1) for j in range(i + 1, k + 1))

    def decode(self, bits: str, k: int) -> Graph:
        if len(bits) != k * (k - 1) // 2 or set(bits) - {"0", "1"}:
            raise ValueError(f"expected {k * (k - 1) // 2} adjacency bits")
        rows = {v: 0 for v in range(1, k + 1)}
        it = iter(bits)
        for i in range(1, k + 1):
            for j in range(i + 1, k + 1):
                if next(it) == "1":
                    rows[i] |= 1 << j
                    rows[j] |= 1 << i
        return Graph.from_rows(rows)

    def length(self, k: int) -> int:
        return k * (k - 1) // 2


def label_width(n: int) -> int:
    return max(0, math.ceil(math.log2(n))) if n >= 1 else 0


# ---------------------------------------------------------------------------
# encode / decode
# ---------------------------------------------------------------------------

def _check_vertex_set(g: Graph) -> None:
    if g.vertices != tuple(range(1, g.n + 1)):
        raise ArgumentError("the modular codec expects vertex set {1..n}")


def _records(node: MDNode, pc: PrimeCodec, w: int, out: list[str]) -> None:
    if node.kind == LEAF:
        out.append("0" + format(node.label - 1, f"0{w}b") if w else "0")
        return
    q = node.quotient
    if not pc.accepts(q):
        raise UnsupportedPrimeError(q)
    out.append("1" + format(len(node.children), "b") + "|" + pc.encode(q) + "|")
    for c in node.children:
        _records(c, pc, w, out)


def encode_modular(g, pc: PrimeCodec | None = None) -> str:
    g = as_graph(g)
    pc = pc or NaivePrimeCodec()
    _check_vertex_set(g)
    head = format(g.n, "b") + "|"
    if g.n <= 1:
        return head
    out: list[str] = [head]
    _records(decompose(g), pc, label_width(g.n), out)
    return "".join(out)


class _Reader:
    def __init__(self, word: str):
        self.w = word
        self.i = 0

    def take(self, k: int) -> str:
        if self.i + k > len(self.w):
            raise MalformedWordError("word ends inside a record", len(self.w))
        s = self.w[self.i:self.i + k]
        self.i += k
        return s

    def until_bar(self) -> str:
        j = self.w.find("|", self.i)
        if j < 0:
            raise MalformedWordError("missing '|' delimiter", len(self.w))
        s = self.w[self.i:j]
        self.i = j + 1
        return s


def _parse_bin(s: str, pos: int) -> int:
    if not s or set(s) - {"0", "1"} or (len(s) > 1 and s[0] == "0"):
        raise MalformedWordError(f"bad binary number {s!r}", pos)
    return int(s, 2)


def decode_modular(word: str, pc: PrimeCodec | None = None) -> Graph:
    pc = pc or NaivePrimeCodec()
    if set(word) - {"0", "1", "|"}:
        bad = next(i for i, ch in enumerate(word) if ch not in "01|")
        raise MalformedWordError(f"symbol {word[bad]!r} outside the ternary alphabet", bad)
    r = _Reader(word)
    n = _parse_bin(r.until_bar(), 0)
    if n <= 1:
        if r.i != len(word):
            raise MalformedWordError("trailing symbols after a trivial header", r.i)
        return Graph.on(n)
    w = label_width(n)
    rows = {v: 0 for v in range(1, n + 1)}
    seen = 0

    def node() -> int:
        nonlocal seen
        pos = r.i
        tag = r.take(1)
        if tag == "0":
            raw = r.take(w)
            if set(raw) - {"0", "1"}:
                raise MalformedWordError("leaf label is not binary", pos + 1)
            j = int(raw, 2) + 1 if w else 1
            if j > n or seen >> j & 1:
                raise MalformedWordError(f"leaf label {j} out of range or repeated", pos)
            seen |= 1 << j
            return 1 << j
        if tag != "1":
            raise MalformedWordError(f"bad tag symbol {tag!r}", pos)
        kpos = r.i
        k = _parse_bin(r.until_bar(), kpos)
        if k < 2:
            raise MalformedWordError("internal node with fewer than two children", kpos)
        qpos = r.i
        try:
            q = pc.decode(r.until_bar(), k)
        except MalformedWordError:
            raise
        except Exception as exc:
            raise MalformedWordError(f"prime codec failed: {exc}", qpos) from None
        parts = [node() for _ in range(k)]
        for i, j in q.edges():
            a, b = parts[i - 1], parts[j - 1]
            for v in iter_bits(a):
                rows[v] |= b
            for v in iter_bits(b):
                rows[v] |= a
        return sum(parts)

    node()
    if r.i != len(word):
        raise MalformedWordError("trailing symbols after the root record", r.i)
    if seen != (1 << (n + 1)) - 2:
        raise MalformedWordError("leaf labels do not cover 1..n", len(word))
    g = Graph.from_rows(rows)
    # only canonical words are valid: re-encoding must reproduce the input
    again = encode_modular(g, pc)
    if again != word:
        pos = next((i for i, (a, b) in enumerate(zip(again, word)) if a != b), min(len(again), len(word)))
        raise MalformedWordError("word is not the canonical encoding of any graph", pos)
    return g


# ---------------------------------------------------------------------------
# length accounting
# ---------------------------------------------------------------------------

@dataclass
class LengthReport:
    n: int
    word_length: int
    header: int
    leaf_contribution: int
    leaf_tags: int
    internal_contribution: int
    c: float
    bound: float
    ok: bool

    def to_json(self) -> dict:
        return dict(self.__dict__)


def check_length_accounting(g, pc: PrimeCodec | None = None, c: float | None = None) -> LengthReport:
    """Split the word length into header, leaf and internal parts and test the bound.

    The internal contribution counts each internal record in full, tag symbol
    included, and is compared against ``(c + 2) n log2 n + n``.  Unless given,
    ``c`` is measured on this graph's quotients.
    """
    g = as_graph(g)
    pc = pc or NaivePrimeCodec()
    word = encode_modular(g, pc)
    n = g.n
    header = len(format(n, "b")) + 1
    if n <= 1:
        return LengthReport(n, len(word), header, 0, 0, 0, c or 0.0, float(n), True)
    tree = decompose(g)
    internal = 0
    quotients = []
    for node in tree.walk():
        if node.kind != LEAF:
            quotients.append(node.quotient)
            internal += 1 + len(format(len(node.children), "b")) + 1 + len(pc.encode(node.quotient)) + 1
    if c is None:
        c = pc.bound(quotients)
    leaf = n * label_width(n)
    bound = (c + 2) * n * math.log2(n) + n
    assert header + leaf + n + internal == len(word)
    return LengthReport(n, len(word), header, leaf, n, internal, c, bound, internal <= bound + 1e-9)

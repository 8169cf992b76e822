"""Adjacency labeling schemes and the covering/peeling combinators.

A scheme is a *descriptor* (small, graph-size metadata only) plus one bit string
per vertex.  ``descriptor.query(label_u, label_v)`` decides adjacency from the
two labels alone.  Labels are Python strings over ``0``/``1``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable, Optional

from .errors import ArgumentError, CertificateInvalidError, DecodeError, SchemeUnavailableError
from .graph import BipartiteGraph, Graph, as_graph, bits_to_list, iter_bits, to_mask

# flags for "the stored list is ..."
FEW_NEIGHBOURS = "N"          # ... the neighbours among later vertices
FEW_NON_NEIGHBOURS = "C"      # ... the non-neighbours among later vertices
FEW_OPPOSITE_NON_NEIGHBOURS = "B"  # ... the non-neighbours in the opposite part among later vertices
_FLAG_BITS = {FEW_NEIGHBOURS: "00", FEW_NON_NEIGHBOURS: "01", FEW_OPPOSITE_NON_NEIGHBOURS: "10"}
_BITS_FLAG = {v: k for k, v in _FLAG_BITS.items()}


def width(n: int) -> int:
    """Bits needed for an index in ``0..n-1``."""
    return math.ceil(math.log2(n)) if n > 1 else 0


def _uint(x: int, w: int) -> str:
    if x < 0 or x >> w:
        raise ArgumentError(f"{x} does not fit in {w} bits")
    return format(x, f"0{w}b") if w else ""


class _Cursor:
    def __init__(self, bits: str):
        if set(bits) - {"0", "1"}:
            raise DecodeError("label contains symbols other than 0/1")
        self.bits = bits
        self.i = 0

    def read(self, w: int) -> int:
        if self.i + w > len(self.bits):
            raise DecodeError("label too short")
        s = self.bits[self.i:self.i + w]
        self.i += w
        return int(s, 2) if s else 0

    def raw(self, w: int) -> str:
        if self.i + w > len(self.bits):
            raise DecodeError("label too short")
        s = self.bits[self.i:self.i + w]
        self.i += w
        return s

    def rest(self) -> str:
        s = self.bits[self.i:]
        self.i = len(self.bits)
        return s

    def done(self) -> None:
        if self.i != len(self.bits):
            raise DecodeError("trailing bits in label")


class Scheme:
    """Descriptor base class.  Subclasses set ``kind`` and the length constants."""

    kind = "abstract"
    C: float = 0       # coefficient of ceil(log2 n) in the declared length bound
    additive: int = 0  # constant term of the declared bound
    n: int = 0

    def decode(self, label: str):
        raise NotImplementedError

    def query_decoded(self, a, b) -> bool:
        raise NotImplementedError

    def query(self, label_u: str, label_v: str) -> bool:
        return self.query_decoded(self.decode(label_u), self.decode(label_v))

    def length_bound(self) -> float:
        return self.C * width(self.n) + self.additive

    def to_json(self) -> dict:
        raise NotImplementedError


@dataclass
class LabelingScheme:
    descriptor: Scheme
    labels: dict[int, str]

    def adjacent(self, u: int, v: int) -> bool:
        try:
            lu, lv = self.labels[u], self.labels[v]
        except KeyError as exc:
            raise ArgumentError(f"vertex {exc.args[0]} has no label") from None
        return self.descriptor.query(lu, lv)

    @property
    def max_length(self) -> int:
        return max((len(s) for s in self.labels.values()), default=0)

    def mismatches(self, g) -> list[tuple[int, int]]:
        """All vertex pairs on which the labels disagree with ``g``."""
        g = as_graph(g)
        dec = {v: self.descriptor.decode(self.labels[v]) for v in g.vertices}
        bad = []
        verts = g.vertices
        for i, u in enumerate(verts):
            for v in verts[i + 1:]:
                if self.descriptor.query_decoded(dec[u], dec[v]) != g.adj(u, v):
                    bad.append((u, v))
        return bad

    def verify(self, g) -> bool:
        return not self.mismatches(g) and self.max_length <= self.descriptor.length_bound() + 1e-9

    def to_json(self) -> dict:
        return {"scheme": self.descriptor.to_json(),
                "labels": {str(v): label_to_json(s) for v, s in sorted(self.labels.items())}}

    @classmethod
    def from_json(cls, obj: dict) -> "LabelingScheme":
        desc = scheme_from_json(obj["scheme"])
        labels = {int(k): label_from_json(v) for k, v in obj["labels"].items()}
        return cls(desc, labels)


def label_to_json(bits: str) -> dict:
    digits = (len(bits) + 3) // 4
    return {"hex": format(int(bits, 2), f"0{digits}x") if bits else "", "bits": len(bits)}


def label_from_json(obj: dict) -> str:
    try:
        nbits = int(obj["bits"])
        h = obj["hex"]
        if nbits < 0 or len(h) != (nbits + 3) // 4:
            raise DecodeError("hex length does not match bit count")
        if not nbits:
            return ""
        value = int(h, 16)
    except (KeyError, TypeError, ValueError) as exc:
        raise DecodeError(f"malformed label record: {exc}") from None
    if value >> nbits:
        raise DecodeError("label has bits beyond its declared length")
    return format(value, f"0{nbits}b")


# ---------------------------------------------------------------------------
# degeneracy orders
# ---------------------------------------------------------------------------

def _choose_flag(deg: int, codeg: int, bcodeg: Optional[int], d: int):
    """Shortest eligible list; neighbours win ties, then the opposite-part list."""
    options = []
    if deg <= d:
        options.append((deg, 0, FEW_NEIGHBOURS))
    if bcodeg is not None and bcodeg <= d:
        options.append((bcodeg, 1, FEW_OPPOSITE_NON_NEIGHBOURS))
    if codeg <= d:
        options.append((codeg, 2, FEW_NON_NEIGHBOURS))
    return min(options)[2] if options else None


def _suffix_list(g: Graph, v: int, rest: int, flag: str, opposite: int = 0) -> int:
    row = g.row(v) & rest
    if flag == FEW_NEIGHBOURS:
        return row
    if flag == FEW_NON_NEIGHBOURS:
        return rest & ~row & ~(1 << v)
    return opposite & rest & ~row


def degeneracy_order(g, d: int, bipartite: bool = False) -> Optional[list[tuple[int, str]]]:
    """Order where each vertex has <= d neighbours or non-neighbours among later ones.

    Returns ``[(vertex, flag), ...]`` or None.  The least eligible vertex is
    taken at each step.  ``bipartite=True`` (needs a :class:`BipartiteGraph`)
    additionally allows few non-neighbours in the opposite part.
    """
    if d < 0:
        raise ArgumentError("d must be non-negative")
    if bipartite and not isinstance(g, BipartiteGraph):
        raise ArgumentError("bipartite degeneracy needs a BipartiteGraph")
    order = degeneracy_order_partial(g, d, bipartite)
    return order if len(order) == as_graph(g).n else None


class DegeneracyScheme(Scheme):
    """label = position, flag, [side], count, then up to d positions of later vertices."""

    kind = "degeneracy"

    def __init__(self, n: int, d: int, bipartite: bool = False):
        self.n, self.d, self.bipartite = n, d, bipartite
        self.w = width(n)
        self.cw = width(d + 1)
        self.C = d + 1
        # one flag bit, or two flag bits plus a side bit in bipartite mode
        self.additive = (3 if bipartite else 1) + self.cw

    def flag_bits(self, flag: str) -> str:
        return _FLAG_BITS[flag] if self.bipartite else _FLAG_BITS[flag][1]

    def decode(self, label: str):
        c = _Cursor(label)
        pos = c.read(self.w)
        flag = _BITS_FLAG.get(c.raw(2) if self.bipartite else "0" + c.raw(1))
        if flag is None:
            raise DecodeError("bad flag bits")
        side = c.read(1) if self.bipartite else 0
        cnt = c.read(self.cw)
        if cnt > self.d:
            raise DecodeError("list longer than d")
        lst = frozenset(c.read(self.w) for _ in range(cnt))
        c.done()
        return pos, flag, side, lst

    def query_decoded(self, a, b) -> bool:
        if a[0] == b[0]:
            raise DecodeError("two labels share a position")
        if a[0] > b[0]:
            a, b = b, a
        listed = b[0] in a[3]
        if a[1] == FEW_NEIGHBOURS:
            return listed
        if a[1] == FEW_NON_NEIGHBOURS:
            return not listed
        return a[2] != b[2] and not listed

    def to_json(self) -> dict:
        out = {"kind": self.kind, "d": self.d, "n": self.n, "C": self.C}
        if self.bipartite:
            out["bipartite"] = True
        return out

    @classmethod
    def from_json(cls, obj):
        return cls(obj["n"], obj["d"], obj.get("bipartite", False))


def label_by_degeneracy(g, d: int, bipartite: bool = False) -> LabelingScheme:
    order = degeneracy_order(g, d, bipartite)
    gg = as_graph(g)
    if order is None:
        rest = _stuck_suffix(g, d, bipartite)
        raise SchemeUnavailableError(
            f"no degeneracy order with d={d}: every vertex of {bits_to_list(rest)} has more than "
            f"{d} neighbours and non-neighbours there", residual=gg.induced(rest))
    desc = DegeneracyScheme(gg.n, d, bipartite)
    pos = {v: i for i, (v, _) in enumerate(order)}
    rest = gg.vertex_mask
    labels = {}
    for v, flag in order:
        rest &= ~(1 << v)
        opp = g.opposite(v) if bipartite else 0
        lst = sorted(pos[u] for u in iter_bits(_suffix_list(gg, v, rest, flag, opp)))
        side = _uint(g.side(v), 1) if bipartite else ""
        labels[v] = (_uint(pos[v], desc.w) + desc.flag_bits(flag) + side + _uint(len(lst), desc.cw)
                     + "".join(_uint(p, desc.w) for p in lst))
    return LabelingScheme(desc, labels)


def _stuck_suffix(g, d, bipartite) -> int:
    gg = as_graph(g)
    rest = gg.vertex_mask
    for v, _ in degeneracy_order_partial(g, d, bipartite):
        rest &= ~(1 << v)
    return rest


def degeneracy_order_partial(g, d, bipartite=False):
    """Longest prefix of the greedy order (used to report where it gets stuck)."""
    bip = g if isinstance(g, BipartiteGraph) else None
    gg = as_graph(g)
    rest = gg.vertex_mask
    out = []
    progress = True
    while rest and progress:
        progress = False
        size = rest.bit_count()
        for v in iter_bits(rest):
            deg = (gg.row(v) & rest).bit_count()
            bco = (bip.opposite(v) & rest & ~gg.row(v)).bit_count() if bipartite else None
            flag = _choose_flag(deg, size - 1 - deg, bco, d)
            if flag:
                out.append((v, flag))
                rest &= ~(1 << v)
                progress = True
                break
    return out


# ---------------------------------------------------------------------------
# small fixed schemes
# ---------------------------------------------------------------------------

class BicliqueScheme(Scheme):
    """Complete bipartite graphs: one side bit, adjacent iff the bits differ."""

    kind = "biclique"
    C = 0
    additive = 1

    def __init__(self, n: int = 0):
        self.n = n

    def decode(self, label: str):
        c = _Cursor(label)
        s = c.read(1)
        c.done()
        return s

    def query_decoded(self, a, b) -> bool:
        return a != b

    def to_json(self):
        return {"kind": self.kind, "n": self.n}

    @classmethod
    def from_json(cls, obj):
        return cls(obj.get("n", 0))


def label_biclique(g, top: Iterable[int] | int) -> LabelingScheme:
    """Labels for a graph that is complete bipartite with ``top`` as one side."""
    gg = as_graph(g)
    tmask = top if isinstance(top, int) else to_mask(top)
    labels = {v: "0" if tmask >> v & 1 else "1" for v in gg.vertices}
    return LabelingScheme(BicliqueScheme(gg.n), labels)


class BipartiteComplementScheme(Scheme):
    """Wraps a scheme for the bipartite complement: label = side bit + inner label."""

    kind = "bipartite-complement"

    def __init__(self, inner: Scheme):
        self.inner = inner
        self.n = inner.n
        self.C = inner.C
        self.additive = inner.additive + 1

    def decode(self, label: str):
        if not label:
            raise DecodeError("empty label")
        if label[0] not in "01":
            raise DecodeError("bad side bit")
        return label[0], self.inner.decode(label[1:])

    def query_decoded(self, a, b) -> bool:
        return a[0] != b[0] and not self.inner.query_decoded(a[1], b[1])

    def to_json(self):
        return {"kind": self.kind, "inner": self.inner.to_json()}

    @classmethod
    def from_json(cls, obj):
        return cls(scheme_from_json(obj["inner"]))


def wrap_bipartite_complement(g: BipartiteGraph, inner: LabelingScheme) -> LabelingScheme:
    """``inner`` labels the bipartite complement of ``g``; return labels for ``g``."""
    labels = {v: str(g.side(v)) + inner.labels[v] for v in g.vertices}
    return LabelingScheme(BipartiteComplementScheme(inner.descriptor), labels)


# ---------------------------------------------------------------------------
# coverings
# ---------------------------------------------------------------------------

@dataclass
class Covering:
    """Subgraphs whose vertex and edge unions give the host graph."""

    parts: list[Graph]

    @property
    def multiplicity(self) -> int:
        count: dict[int, int] = {}
        for h in self.parts:
            for v in h.vertices:
                count[v] = count.get(v, 0) + 1
        return max(count.values(), default=0)

    def problems(self, g) -> list[str]:
        g = as_graph(g)
        out = []
        vs, es = 0, set()
        for i, h in enumerate(self.parts):
            if h.vertex_mask & ~g.vertex_mask:
                out.append(f"part {i} uses vertices outside the graph")
                continue
            for u, v in h.edges():
                if not g.adj(u, v):
                    out.append(f"part {i} has non-edge ({u}, {v})")
                es.add((u, v))
            vs |= h.vertex_mask
        if vs != g.vertex_mask:
            out.append(f"vertex uncovered: {bits_to_list(g.vertex_mask & ~vs)[0]}")
        missing = set(g.edges()) - es
        if missing:
            out.append(f"edge uncovered: {min(missing)}")
        return out


def _dfs_forest(rows: dict[int, int], verts: list[int]) -> list[tuple[int, int]]:
    seen = 0
    edges = []
    for s in verts:
        if seen >> s & 1 or not rows[s]:
            continue
        seen |= 1 << s
        stack = [s]
        while stack:
            u = stack[-1]
            nxt = rows[u] & ~seen
            if not nxt:
                stack.pop()
                continue
            w = (nxt & -nxt).bit_length() - 1
            seen |= 1 << w
            edges.append((min(u, w), max(u, w)))
            stack.append(w)
    return edges


def forest_cover(g) -> Covering:
    """Partition the edges into forests by repeated greedy DFS spanning-forest extraction.

    Each part holds the non-isolated vertices of its forest; isolated vertices of
    the host are added to the first part so the vertex union is complete.
    """
    g = as_graph(g)
    rows = {v: g.row(v) for v in g.vertices}
    verts = list(g.vertices)
    parts = []
    while any(rows.values()):
        edges = _dfs_forest(rows, verts)
        for u, v in edges:
            rows[u] &= ~(1 << v)
            rows[v] &= ~(1 << u)
        touched = sorted({x for e in edges for x in e})
        parts.append(Graph(touched, edges))
    isolated = [v for v in g.vertices if not g.row(v)]
    if isolated or not parts:
        if parts:
            first = parts[0]
            parts[0] = Graph(list(first.vertices) + isolated, first.edges())
        else:
            parts.append(Graph(isolated))
    return Covering(parts)


class CoveringScheme(Scheme):
    """label = entries (part index, fixed-width length, sub-label) for each part containing the vertex."""

    kind = "covering"

    def __init__(self, subs: list[Scheme], lenw: int, c: int, n: int):
        self.subs = subs
        self.k = len(subs)
        self.iw = width(self.k)
        self.lenw = lenw
        self.c = c
        self.n = n
        sub_c = max((s.C for s in subs), default=0)
        sub_add = max((s.additive for s in subs), default=0)
        self.C = c * (1 + sub_c)
        self.additive = c * (width(c) + 1 + lenw + sub_add)

    def decode(self, label: str):
        cur = _Cursor(label)
        out = {}
        while cur.i < len(label):
            i = cur.read(self.iw)
            ln = cur.read(self.lenw)
            if i >= self.k or i in out:
                raise DecodeError("bad part index")
            out[i] = self.subs[i].decode(cur.raw(ln))
        return out

    def query_decoded(self, a, b) -> bool:
        for i in a.keys() & b.keys():
            if self.subs[i].query_decoded(a[i], b[i]):
                return True
        return False

    def to_json(self):
        return {"kind": self.kind, "n": self.n, "c": self.c, "lenw": self.lenw, "C": self.C,
                "parts": [s.to_json() for s in self.subs]}

    @classmethod
    def from_json(cls, obj):
        return cls([scheme_from_json(s) for s in obj["parts"]], obj["lenw"], obj["c"], obj["n"])


def combine_covering(cov: Covering, sub: list[LabelingScheme], n: int | None = None) -> LabelingScheme:
    if len(sub) != len(cov.parts):
        raise ArgumentError(f"{len(cov.parts)} parts but {len(sub)} sub-schemes")
    if n is None:
        n = to_mask(v for h in cov.parts for v in h.vertices).bit_count()
    maxlen = max((s.max_length for s in sub), default=0)
    lenw = max(1, maxlen.bit_length())
    desc = CoveringScheme([s.descriptor for s in sub], lenw, max(1, cov.multiplicity), n)
    labels: dict[int, str] = {}
    for i, (h, s) in enumerate(zip(cov.parts, sub)):
        for v in h.vertices:
            lab = s.labels[v]
            labels[v] = labels.get(v, "") + _uint(i, desc.iw) + _uint(len(lab), lenw) + lab
    return LabelingScheme(desc, labels)


def forest_cover_scheme(g) -> LabelingScheme:
    cov = forest_cover(g)
    return combine_covering(cov, [label_by_degeneracy(h, 1) for h in cov.parts], as_graph(g).n)


# ---------------------------------------------------------------------------
# peelings
# ---------------------------------------------------------------------------

@dataclass
class Peeling:
    """Ordered disjoint layers; each vertex has a short list towards the later layers."""

    layers: list[int]  # bitmasks
    d: int
    flags: Optional[dict[int, str]] = None

    def later(self, i: int) -> int:
        m = 0
        for layer in self.layers[i + 1:]:
            m |= layer
        return m

    def resolve_flags(self, g) -> dict[int, str]:
        """Given or automatically chosen flags; raises on a vertex meeting no bound."""
        bip = g if isinstance(g, BipartiteGraph) else None
        gg = as_graph(g)
        out = {}
        for i, layer in enumerate(self.layers):
            rest = self.later(i)
            for v in iter_bits(layer):
                row = gg.row(v) & rest
                deg = row.bit_count()
                codeg = (rest & ~row).bit_count()
                bco = (bip.opposite(v) & rest & ~row).bit_count() if bip is not None else None
                want = (self.flags or {}).get(v)
                if want is None:
                    flag = _choose_flag(deg, codeg, bco, self.d)
                else:
                    size = {FEW_NEIGHBOURS: deg, FEW_NON_NEIGHBOURS: codeg,
                            FEW_OPPOSITE_NON_NEIGHBOURS: bco}[want]
                    flag = want if size is not None and size <= self.d else None
                if flag is None:
                    raise CertificateInvalidError(
                        f"vertex {v} in layer {i} has more than {self.d} neighbours and non-neighbours "
                        "in later layers", vertex=v)
                out[v] = flag
        return out

    def problems(self, g) -> list[str]:
        gg = as_graph(g)
        seen = 0
        out = []
        for i, layer in enumerate(self.layers):
            if not layer:
                out.append(f"layer {i} is empty")
            if layer & seen:
                out.append(f"layer {i} overlaps an earlier layer")
            seen |= layer
        if seen != gg.vertex_mask:
            out.append("layers do not cover the vertex set")
        try:
            self.resolve_flags(g)
        except CertificateInvalidError as exc:
            out.append(str(exc))
        return out


class PeelingScheme(Scheme):
    """label = layer, flag, side, own id, count, ids of listed later vertices, inner label."""

    kind = "peeling"

    def __init__(self, inners: list[Scheme], d: int, n: int, maxid: int):
        self.inners = inners
        self.d, self.n = d, n
        self.lw = width(len(inners))
        self.idw = max(1, maxid.bit_length())
        self.cw = width(d + 1)
        ic = max((s.C for s in inners), default=0)
        ia = max((s.additive for s in inners), default=0)
        self.C = d + 2 + ic
        self.additive = 3 + self.cw + ia + (self.idw - width(n)) * (d + 1)

    def decode(self, label: str):
        c = _Cursor(label)
        layer = c.read(self.lw)
        if layer >= len(self.inners):
            raise DecodeError("layer index out of range")
        flag = _BITS_FLAG.get(c.raw(2))
        if flag is None:
            raise DecodeError("bad flag bits")
        side = c.read(1)
        own = c.read(self.idw)
        cnt = c.read(self.cw)
        if cnt > self.d:
            raise DecodeError("list longer than d")
        lst = frozenset(c.read(self.idw) for _ in range(cnt))
        return layer, flag, side, own, lst, self.inners[layer].decode(c.rest())

    def query_decoded(self, a, b) -> bool:
        if a[0] == b[0]:
            return self.inners[a[0]].query_decoded(a[5], b[5])
        if a[0] > b[0]:
            a, b = b, a
        listed = b[3] in a[4]
        if a[1] == FEW_NEIGHBOURS:
            return listed
        if a[1] == FEW_NON_NEIGHBOURS:
            return not listed
        return a[2] != b[2] and not listed

    def to_json(self):
        return {"kind": self.kind, "n": self.n, "d": self.d, "idw": self.idw, "C": self.C,
                "layers": [s.to_json() for s in self.inners]}

    @classmethod
    def from_json(cls, obj):
        return cls([scheme_from_json(s) for s in obj["layers"]], obj["d"], obj["n"], (1 << obj["idw"]) - 1)


def combine_peeling(g, peel: Peeling, inner: Callable[[object, int], LabelingScheme]) -> LabelingScheme:
    """Labels from a peeling and a builder ``inner(subgraph, layer_index)``.

    The subgraph passed to the builder is ``g`` induced on the layer (bipartite
    if ``g`` is).
    """
    bad = peel.problems(g)
    if bad:
        flags_err = [b for b in bad if "non-neighbours" in b]
        if flags_err:
            peel.resolve_flags(g)  # raises with the vertex attached
        raise CertificateInvalidError("; ".join(bad))
    flags = peel.resolve_flags(g)
    bip = g if isinstance(g, BipartiteGraph) else None
    gg = as_graph(g)
    maxid = max(gg.vertices, default=1)
    subs = [inner(g.induced(layer), i) for i, layer in enumerate(peel.layers)]
    desc = PeelingScheme([s.descriptor for s in subs], peel.d, gg.n, maxid)
    labels = {}
    for i, layer in enumerate(peel.layers):
        rest = peel.later(i)
        for v in iter_bits(layer):
            flag = flags[v]
            lst = bits_to_list(_suffix_list(gg, v, rest, flag, bip.opposite(v) if bip else 0))
            side = bip.side(v) if bip else 0
            labels[v] = (_uint(i, desc.lw) + _FLAG_BITS[flag] + _uint(side, 1) + _uint(v, desc.idw)
                         + _uint(len(lst), desc.cw) + "".join(_uint(u, desc.idw) for u in lst)
                         + subs[i].labels[v])
    return LabelingScheme(desc, labels)


# ---------------------------------------------------------------------------

_KINDS = {
    "degeneracy": DegeneracyScheme,
    "biclique": BicliqueScheme,
    "bipartite-complement": BipartiteComplementScheme,
    "covering": CoveringScheme,
    "peeling": PeelingScheme,
}


def scheme_from_json(obj: dict) -> Scheme:
    try:
        cls = _KINDS[obj["kind"]]
    except (KeyError, TypeError):
        raise DecodeError(f"unknown scheme descriptor {obj!r}") from None
    try:
        return cls.from_json(obj)
    except KeyError as exc:
        raise DecodeError(f"scheme descriptor lacks field {exc.args[0]!r}") from None


def adjacency_query(descriptor: Scheme | dict, label_u: str, label_v: str) -> bool:
    if isinstance(descriptor, dict):
        descriptor = scheme_from_json(descriptor)
    return descriptor.query(label_u, label_v)

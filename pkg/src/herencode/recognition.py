"""Induced-pattern search, chordality, bicliques, modules and class membership."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Iterator, Optional

from .errors import ArgumentError
from .graph import BipartiteGraph, Graph, as_graph, bits_to_list, iter_bits, to_mask
from .patterns import NamedPattern, instantiate

Embedding = dict  # pattern vertex -> host vertex


# ---------------------------------------------------------------------------
# induced embeddings
# ---------------------------------------------------------------------------

def _embeddings(g: Graph, h: Graph, allowed: dict[int, int], order: list[int]) -> Iterator[dict]:
    """Backtracking over pattern vertices in ``order``; host candidates ascending.

    ``allowed[p]`` restricts the host vertices pattern vertex ``p`` may take.
    """
    k = len(order)
    if k == 0:
        yield {}
        return
    vm = g.vertex_mask
    hdeg = {p: h.degree(p) for p in order}
    gdeg = {v: g.degree(v) for v in g.vertices}
    # degree filter: an induced copy preserves every edge of h
    cand0 = {}
    for p in order:
        need, m = hdeg[p], 0
        for v in iter_bits(allowed[p]):
            if gdeg[v] >= need:
                m |= 1 << v
        cand0[p] = m
    img: list[int] = [0] * k
    pos = {p: i for i, p in enumerate(order)}
    prev_adj = [[(order[j], h.adj(order[i], order[j])) for j in range(i)] for i in range(k)]

    def rec(i: int, used: int):
        p = order[i]
        cand = cand0[p] & ~used
        for q, is_edge in prev_adj[i]:
            r = g.row(img[pos[q]])
            cand &= r if is_edge else (vm & ~r & ~(1 << img[pos[q]]))
            if not cand:
                return
        for v in iter_bits(cand):
            img[i] = v
            if i + 1 == k:
                yield {order[j]: img[j] for j in range(k)}
            else:
                yield from rec(i + 1, used | (1 << v))

    yield from rec(0, 0)


def _orientations(g, h):
    """Allowed-candidate maps for each admissible placement of h's parts in g."""
    if isinstance(g, BipartiteGraph) and isinstance(h, BipartiteGraph):
        out = []
        for gt, gb in ((g.top, g.bottom), (g.bottom, g.top)):
            allowed = {p: (gt if h.top >> p & 1 else gb) for p in h.vertices}
            out.append(allowed)
        return out
    gg = as_graph(g)
    return [{p: gg.vertex_mask for p in as_graph(h).vertices}]


def contains_induced(g, h) -> Optional[Embedding]:
    """Lexicographically least induced embedding of ``h`` into ``g``, or None.

    If both graphs are bipartite, parts must map to parts (in either orientation).
    """
    gg, hh = as_graph(g), as_graph(h)
    if hh.n > gg.n:
        return None
    order = list(hh.vertices)
    best = None
    for allowed in _orientations(g, h):
        emb = next(_embeddings(gg, hh, allowed, order), None)
        if emb is not None:
            key = tuple(emb[p] for p in order)
            if best is None or key < best[0]:
                best = (key, emb)
    return None if best is None else best[1]


@lru_cache(maxsize=4096)
def _connected_order(h: Graph, first: int) -> list[int]:
    """Pattern vertices starting at ``first``, each next one with most edges back."""
    order, chosen = [first], 1 << first
    rest = [q for q in h.vertices if q != first]
    while rest:
        q = max(rest, key=lambda u: ((h.row(u) & chosen).bit_count(), -u))
        rest.remove(q)
        order.append(q)
        chosen |= 1 << q
    return order


def contains_induced_through(g, h, v: int) -> Optional[Embedding]:
    """Some induced embedding of ``h`` into ``g`` whose image contains ``v``."""
    gg, hh = as_graph(g), as_graph(h)
    if hh.n > gg.n:
        return None
    for allowed in _orientations(g, h):
        for p in hh.vertices:
            if not allowed[p] >> v & 1:
                continue
            a = dict(allowed)
            a[p] = 1 << v
            for q in a:
                if q != p:
                    a[q] &= ~(1 << v)
            order = _connected_order(hh, p)
            emb = next(_embeddings(gg, hh, a, order), None)
            if emb is not None:
                return emb
    return None


def all_induced(g, h) -> Iterator[Embedding]:
    gg, hh = as_graph(g), as_graph(h)
    for allowed in _orientations(g, h):
        yield from _embeddings(gg, hh, allowed, list(hh.vertices))


def _side_mask(g: BipartiteGraph, side) -> int:
    if side in ("top", 0):
        return g.top
    if side in ("bottom", 1):
        return g.bottom
    raise ArgumentError(f"side must be 'top' or 'bottom', got {side!r}")


def contains_one_sided(g: BipartiteGraph, h: BipartiteGraph, side="bottom") -> bool:
    """True iff some induced copy of ``h`` puts h's bottom part inside g's ``side``."""
    return one_sided_embedding(g, h, side) is not None


def one_sided_embedding(g: BipartiteGraph, h: BipartiteGraph, side="bottom", through: int | None = None):
    target = _side_mask(g, side)
    other = g.graph.vertex_mask & ~target
    allowed = {p: (other if h.top >> p & 1 else target) for p in h.vertices}
    if through is None:
        return next(_embeddings(g.graph, h.graph, allowed, list(h.vertices)), None)
    for p in h.vertices:
        if not allowed[p] >> through & 1:
            continue
        a = {q: m & ~(1 << through) for q, m in allowed.items()}
        a[p] = 1 << through
        emb = next(_embeddings(g.graph, h.graph, a, _connected_order(h.graph, p)), None)
        if emb is not None:
            return emb
    return None


# ---------------------------------------------------------------------------
# chordality
# ---------------------------------------------------------------------------

def chordality(g) -> int:
    """Length of a longest chordless cycle; 0 when there is none."""
    return _chordless(as_graph(g), None)


def has_chordless_cycle_at_least(g, k: int) -> bool:
    return _chordless(as_graph(g), k) >= k


def _chordless(g: Graph, stop_at: int | None) -> int:
    best = 0
    for s in g.vertices:
        higher = g.vertex_mask & ~((1 << (s + 1)) - 1)
        srow = g.row(s)
        # each entry: (last vertex, #vertices on path, vertices adjacent to an interior path vertex, path)
        stack = []
        for v in reversed(bits_to_list(srow & higher)):
            stack.append((v, 2, 0, (1 << s) | (1 << v)))
        while stack:
            last, length, blocked, path = stack.pop()
            ext = g.row(last) & higher & ~path & ~blocked
            if not ext:
                continue
            # ``last`` becomes interior once we extend past it; vertices touching it
            # (other than the next vertex) may not appear later.  Neighbours of s are
            # only allowed as the closing vertex.
            nblocked = blocked | g.row(last)
            for w in iter_bits(ext):
                if srow >> w & 1:
                    if length + 1 > best:
                        best = length + 1
                        if stop_at is not None and best >= stop_at:
                            return best
                else:
                    stack.append((w, length + 1, nblocked, path | (1 << w)))
    return best


# ---------------------------------------------------------------------------
# bicliques
# ---------------------------------------------------------------------------

def _biclique_one_way(g: BipartiteGraph, side_a: int, side_b: int, p: int, q: int):
    cand_a = bits_to_list(side_a)

    def rec(start: int, chosen: list[int], common: int):
        if len(chosen) == p:
            return chosen, bits_to_list(common)[:q]
        for i in range(start, len(cand_a) - (p - len(chosen)) + 1):
            v = cand_a[i]
            c = common & g.row(v)
            if c.bit_count() >= q:
                r = rec(i + 1, chosen + [v], c)
                if r:
                    return r
        return None

    return rec(0, [], side_b)


def contains_biclique(g: BipartiteGraph, p: int, q: int, orientation: str = "any"):
    """(top-set, bottom-set) of a K_{p,q} subgraph, or None.

    With ``orientation="any"`` the p-side may be in either part; the top-first
    placement is tried first.  Returned sets are sorted lists.
    """
    if p < 1 or q < 1:
        raise ArgumentError("biclique sizes must be positive")
    r = _biclique_one_way(g, g.top, g.bottom, p, q)
    if r:
        return r[0], r[1]
    if orientation == "any" and p != q:
        r = _biclique_one_way(g, g.bottom, g.top, p, q)
        if r:
            return r[1], r[0]
    return None


def maximal_biclique_extension(g: BipartiteGraph, seed) -> tuple[list[int], list[int]]:
    """Greedily grow a complete bipartite seed (ascending label order)."""
    a = to_mask(seed[0])
    b = to_mask(seed[1])
    if a & ~g.top or b & ~g.bottom:
        raise ArgumentError("seed sets must lie in top and bottom respectively")
    for v in iter_bits(a):
        if b & ~g.row(v):
            w = bits_to_list(b & ~g.row(v))[0]
            raise ArgumentError(f"seed is not complete bipartite: {v} and {w} are non-adjacent")
    for v in g.vertices:
        if (a | b) >> v & 1:
            continue
        if g.top >> v & 1:
            if not b & ~g.row(v):
                a |= 1 << v
        elif not a & ~g.row(v):
            b |= 1 << v
    return bits_to_list(a), bits_to_list(b)


# ---------------------------------------------------------------------------
# modules
# ---------------------------------------------------------------------------

def distinguishers(g: Graph, s: int) -> int:
    """Vertices outside mask ``s`` with both a neighbour and a non-neighbour in ``s``."""
    anyn, alln = 0, g.vertex_mask
    for v in iter_bits(s):
        r = g.row(v)
        anyn |= r
        alln &= r
    return anyn & ~alln & ~s


def is_module(g: Graph, s: int) -> bool:
    return distinguishers(g, s) == 0


def module_closure(g: Graph, s: int) -> int:
    """Smallest module containing mask ``s``."""
    anyn, alln = 0, g.vertex_mask
    frontier = s
    while True:
        for v in iter_bits(frontier):
            r = g.row(v)
            anyn |= r
            alln &= r
        d = anyn & ~alln & ~s
        if not d:
            return s
        s |= d
        frontier = d


def find_nontrivial_module(g) -> Optional[list[int]]:
    """A module with 2 <= |M| < n, or None when ``g`` is prime.

    The result is the module closure of the least pair whose closure is proper.
    """
    g = as_graph(g)
    verts = g.vertices
    full = g.vertex_mask
    for i, u in enumerate(verts):
        for v in verts[i + 1:]:
            m = module_closure(g, (1 << u) | (1 << v))
            if m != full:
                return bits_to_list(m)
    return None


def is_prime(g) -> bool:
    g = as_graph(g)
    return g.n >= 3 and find_nontrivial_module(g) is None


# ---------------------------------------------------------------------------
# class specs
# ---------------------------------------------------------------------------

@lru_cache(maxsize=512)
def _inst(p: NamedPattern):
    return instantiate(p)


def _as_pattern_graph(p):
    return _inst(p) if isinstance(p, NamedPattern) else p


def _pattern_json(p):
    if isinstance(p, NamedPattern):
        return p.to_json()
    raise ArgumentError("only named patterns can be serialized")


@dataclass(frozen=True)
class ClassSpec:
    """A hereditary class given by forbidden induced subgraphs and side conditions."""

    forbidden: tuple = ()
    bipartite: bool = False
    chordality_lt: Optional[int] = None
    one_sided: tuple = ()  # (pattern, side) pairs
    name: str = field(default="", compare=False)

    def to_json(self) -> dict:
        out: dict = {"forbidden": [_pattern_json(p) for p in self.forbidden]}
        if self.bipartite:
            out["bipartite"] = True
        if self.chordality_lt is not None:
            out["chordality_lt"] = self.chordality_lt
        if self.one_sided:
            out["one_sided"] = [{**_pattern_json(p), "side": s} for p, s in self.one_sided]
        return out

    @classmethod
    def from_json(cls, obj) -> "ClassSpec":
        if isinstance(obj, (str, bytes)):
            obj = json.loads(obj)
        unknown = set(obj) - {"forbidden", "bipartite", "chordality_lt", "one_sided", "name"}
        if unknown:
            raise ArgumentError(f"unknown class-spec keys {sorted(unknown)}")
        forb = tuple(NamedPattern.from_json(p) for p in obj.get("forbidden", []))
        one = []
        for item in obj.get("one_sided", []):
            item = dict(item)
            side = item.pop("side", "bottom")
            if side not in ("top", "bottom"):
                raise ArgumentError(f"bad side {side!r}")
            one.append((NamedPattern.from_json(item), side))
        k = obj.get("chordality_lt")
        if k is not None and (not isinstance(k, int) or k < 3):
            raise ArgumentError("chordality_lt must be an integer >= 3")
        return cls(forb, bool(obj.get("bipartite", False)), k, tuple(one), obj.get("name", ""))


def _host(g, spec: ClassSpec):
    if isinstance(g, BipartiteGraph):
        return g
    if spec.bipartite or spec.one_sided:
        if g.two_colouring() is None:
            return None
        return BipartiteGraph.from_graph(g)
    return g


def class_violation(g, spec: ClassSpec, through: int | None = None):
    """Why ``g`` is outside ``spec``: ``(reason, vertices)`` or None.

    With ``through`` set, only obstructions containing that vertex are sought
    (useful when ``g`` minus the vertex is already known to be in the class).
    """
    host = _host(g, spec)
    if host is None:
        return ("not bipartite", ())
    for p in spec.forbidden:
        h = _as_pattern_graph(p)
        if through is None:
            emb = contains_induced(host, h)
        else:
            emb = contains_induced_through(host, h, through)
        if emb is not None:
            return (f"contains {p}", tuple(emb[v] for v in sorted(emb)))
    if spec.one_sided:
        for p, side in spec.one_sided:
            emb = one_sided_embedding(host, _as_pattern_graph(p), side, through)
            if emb is not None:
                return (f"contains {p} with its bottom in the {side} part", tuple(emb[v] for v in sorted(emb)))
    if spec.chordality_lt is not None:
        if has_chordless_cycle_at_least(as_graph(host), spec.chordality_lt):
            return (f"has a chordless cycle of length >= {spec.chordality_lt}", ())
    return None


def in_class(g, spec: ClassSpec) -> bool:
    return class_violation(g, spec) is None


def free(*patterns, bipartite: bool = False, chordality_lt: int | None = None, one_sided: Iterable = (),
         name: str = "") -> ClassSpec:
    return ClassSpec(tuple(patterns), bipartite, chordality_lt, tuple(one_sided), name)

"""Labelled simple graphs and bipartite graphs.

Vertices are positive integers. A graph on ``{1..n}`` is the common case, but an
induced subgraph keeps the labels of its parent, so the vertex set can be any
finite set of positive integers.  Adjacency is stored as one bitmask per vertex
(bit ``u`` of ``row[v]`` is set iff ``uv`` is an edge), which keeps neighbourhood
algebra (intersections, symmetric differences, closures) to a handful of integer
operations.
"""

from __future__ import annotations

from collections import deque
from typing import Iterable, Iterator, Mapping

from .errors import ArgumentError, InvariantError


def iter_bits(mask: int) -> Iterator[int]:
    """Yield the set bit positions of ``mask`` in ascending order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def bits_to_list(mask: int) -> list[int]:
    return list(iter_bits(mask))


def to_mask(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


def popcount(mask: int) -> int:
    return mask.bit_count()


class Graph:
    """Immutable labelled simple graph."""

    __slots__ = ("_vertices", "_adj", "_vmask", "_hash")

    def __init__(self, vertices: Iterable[int], edges: Iterable[tuple[int, int]] = ()):
        verts = sorted(set(int(v) for v in vertices))
        if verts and verts[0] < 1:
            raise ArgumentError("vertex labels must be positive integers")
        adj = {v: 0 for v in verts}
        for u, v in edges:
            if u == v:
                raise InvariantError(f"loop at vertex {u}")
            if u not in adj or v not in adj:
                raise ArgumentError(f"edge ({u}, {v}) uses a vertex outside the vertex set")
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        self._set(tuple(verts), adj)

    def _set(self, vertices: tuple[int, ...], adj: dict[int, int]) -> None:
        self._vertices = vertices
        self._adj = adj
        self._vmask = to_mask(vertices)
        self._hash = None

    @classmethod
    def from_rows(cls, rows: Mapping[int, int]) -> "Graph":
        """Build from neighbourhood masks without validation (internal fast path)."""
        g = cls.__new__(cls)
        g._set(tuple(sorted(rows)), dict(rows))
        return g

    @classmethod
    def on(cls, n: int, edges: Iterable[tuple[int, int]] = ()) -> "Graph":
        """Graph with vertex set ``{1..n}``."""
        if n < 0:
            raise ArgumentError("vertex count must be non-negative")
        return cls(range(1, n + 1), edges)

    # -- basic queries -------------------------------------------------
    @property
    def n(self) -> int:
        return len(self._vertices)

    @property
    def vertices(self) -> tuple[int, ...]:
        return self._vertices

    @property
    def vertex_mask(self) -> int:
        return self._vmask

    def __contains__(self, v: int) -> bool:
        return v in self._adj

    def adj(self, u: int, v: int) -> bool:
        return bool(self._adj[u] >> v & 1)

    def row(self, v: int) -> int:
        """Neighbourhood of ``v`` as a bitmask."""
        return self._adj[v]

    def neighbours(self, v: int) -> list[int]:
        return bits_to_list(self._adj[v])

    def degree(self, v: int) -> int:
        return self._adj[v].bit_count()

    def codegree(self, v: int) -> int:
        return self.n - 1 - self.degree(v)

    def edges(self) -> list[tuple[int, int]]:
        out = []
        for u in self._vertices:
            for v in iter_bits(self._adj[u] >> (u + 1)):
                out.append((u, u + 1 + v))
        return out

    @property
    def num_edges(self) -> int:
        return sum(r.bit_count() for r in self._adj.values()) // 2

    # -- transforms ----------------------------------------------------
    def complement(self) -> "Graph":
        vm = self._vmask
        return Graph.from_rows({v: vm & ~self._adj[v] & ~(1 << v) for v in self._vertices})

    def induced(self, subset: Iterable[int] | int) -> "Graph":
        mask = subset if isinstance(subset, int) else to_mask(subset)
        if mask & ~self._vmask:
            bad = bits_to_list(mask & ~self._vmask)
            raise ArgumentError(f"vertices {bad} are not in the graph")
        return Graph.from_rows({v: self._adj[v] & mask for v in iter_bits(mask)})

    def relabel(self, mapping: Mapping[int, int]) -> "Graph":
        return Graph((mapping[v] for v in self._vertices),
                     ((mapping[u], mapping[v]) for u, v in self.edges()))

    def normalized(self) -> "Graph":
        """Relabel vertices to ``1..n`` preserving their order."""
        return self.relabel({v: i for i, v in enumerate(self._vertices, 1)})

    # -- connectivity --------------------------------------------------
    def components(self) -> list[int]:
        """Connected components as bitmasks, ordered by minimum label."""
        remaining = self._vmask
        comps = []
        while remaining:
            start = remaining & -remaining
            comp = start
            frontier = start
            while frontier:
                nxt = 0
                for v in iter_bits(frontier):
                    nxt |= self._adj[v]
                nxt &= ~comp
                comp |= nxt
                frontier = nxt
            comps.append(comp)
            remaining &= ~comp
        return comps

    def is_connected(self) -> bool:
        return self.n <= 1 or len(self.components()) == 1

    def two_colouring(self) -> dict[int, int] | None:
        """BFS 2-colouring (least vertex of each component gets colour 0), or None."""
        colour: dict[int, int] = {}
        for s in self._vertices:
            if s in colour:
                continue
            colour[s] = 0
            queue = deque([s])
            while queue:
                u = queue.popleft()
                for w in iter_bits(self._adj[u]):
                    if w not in colour:
                        colour[w] = 1 - colour[u]
                        queue.append(w)
                    elif colour[w] == colour[u]:
                        return None
        return colour

    # -- dunder --------------------------------------------------------
    def __eq__(self, other) -> bool:
        return isinstance(other, Graph) and self._adj == other._adj

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(tuple(sorted(self._adj.items())))
        return self._hash

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, edges={self.edges()})"


class BipartiteGraph:
    """A graph together with an explicit partition into two independent sets."""

    __slots__ = ("graph", "top", "bottom")

    def __init__(self, graph: Graph, top: Iterable[int] | int, bottom: Iterable[int] | int | None = None):
        tmask = top if isinstance(top, int) else to_mask(top)
        if bottom is None:
            bmask = graph.vertex_mask & ~tmask
        else:
            bmask = bottom if isinstance(bottom, int) else to_mask(bottom)
        if tmask & bmask or (tmask | bmask) != graph.vertex_mask:
            raise InvariantError("top and bottom must partition the vertex set")
        for side in (tmask, bmask):
            for v in iter_bits(side):
                w = graph.row(v) & side
                if w:
                    raise InvariantError(f"edge ({v}, {bits_to_list(w)[0]}) lies inside one part")
        self.graph = graph
        self.top = tmask
        self.bottom = bmask

    @classmethod
    def _trusted(cls, graph: Graph, top: int, bottom: int) -> "BipartiteGraph":
        b = cls.__new__(cls)
        b.graph, b.top, b.bottom = graph, top, bottom
        return b

    @classmethod
    def from_edges(cls, top: Iterable[int], bottom: Iterable[int], edges: Iterable[tuple[int, int]] = ()):
        top, bottom = list(top), list(bottom)
        return cls(Graph(top + bottom, edges), to_mask(top), to_mask(bottom))

    @classmethod
    def from_graph(cls, graph: Graph) -> "BipartiteGraph":
        """Use the canonical BFS 2-colouring (colour 0 on top)."""
        colour = graph.two_colouring()
        if colour is None:
            from .errors import NotBipartiteError
            raise NotBipartiteError("graph contains an odd cycle")
        top = to_mask(v for v, c in colour.items() if c == 0)
        return cls._trusted(graph, top, graph.vertex_mask & ~top)

    @property
    def n(self) -> int:
        return self.graph.n

    @property
    def vertices(self) -> tuple[int, ...]:
        return self.graph.vertices

    def adj(self, u: int, v: int) -> bool:
        return self.graph.adj(u, v)

    def row(self, v: int) -> int:
        return self.graph.row(v)

    def side(self, v: int) -> int:
        """0 for top, 1 for bottom."""
        return 0 if self.top >> v & 1 else 1

    def part_of(self, v: int) -> int:
        return self.top if self.top >> v & 1 else self.bottom

    def opposite(self, v: int) -> int:
        return self.bottom if self.top >> v & 1 else self.top

    def bipartite_codegree(self, v: int) -> int:
        """Number of non-neighbours of ``v`` in the opposite part."""
        return (self.opposite(v) & ~self.graph.row(v)).bit_count()

    def induced(self, subset: Iterable[int] | int) -> "BipartiteGraph":
        mask = subset if isinstance(subset, int) else to_mask(subset)
        g = self.graph.induced(mask)
        return BipartiteGraph._trusted(g, self.top & mask, self.bottom & mask)

    def swapped(self) -> "BipartiteGraph":
        return BipartiteGraph._trusted(self.graph, self.bottom, self.top)

    def relabel(self, mapping: Mapping[int, int]) -> "BipartiteGraph":
        g = self.graph.relabel(mapping)
        top = to_mask(mapping[v] for v in iter_bits(self.top))
        return BipartiteGraph._trusted(g, top, g.vertex_mask & ~top)

    def __eq__(self, other) -> bool:
        return (isinstance(other, BipartiteGraph) and self.graph == other.graph
                and self.top == other.top)

    def __hash__(self) -> int:
        return hash((self.graph, self.top))

    def __repr__(self) -> str:
        return (f"BipartiteGraph(top={bits_to_list(self.top)}, bottom={bits_to_list(self.bottom)}, "
                f"edges={self.graph.edges()})")


def as_graph(g: Graph | BipartiteGraph) -> Graph:
    return g.graph if isinstance(g, BipartiteGraph) else g


def complement(g: Graph) -> Graph:
    return as_graph(g).complement()


def bipartite_complement(g: BipartiteGraph) -> BipartiteGraph:
    """Flip every cross-part adjacency; the parts are unchanged."""
    rows = {}
    for v in g.vertices:
        rows[v] = g.opposite(v) & ~g.graph.row(v)
    return BipartiteGraph._trusted(Graph.from_rows(rows), g.top, g.bottom)


def induced_subgraph(g, subset):
    """Induced subgraph on ``subset``; original labels are retained."""
    return g.induced(subset)


def disjoint_union(*graphs: Graph | BipartiteGraph):
    """Disjoint union with the second graph's labels shifted past the first's."""
    if all(isinstance(g, BipartiteGraph) for g in graphs):
        top, bottom, edges, offset = [], [], [], 0
        for g in graphs:
            mapping = {v: i + offset for i, v in enumerate(g.vertices, 1)}
            top += [mapping[v] for v in iter_bits(g.top)]
            bottom += [mapping[v] for v in iter_bits(g.bottom)]
            edges += [(mapping[u], mapping[v]) for u, v in g.graph.edges()]
            offset += g.n
        return BipartiteGraph.from_edges(top, bottom, edges)
    verts, edges, offset = [], [], 0
    for g in graphs:
        g = as_graph(g)
        mapping = {v: i + offset for i, v in enumerate(g.vertices, 1)}
        verts += list(mapping.values())
        edges += [(mapping[u], mapping[v]) for u, v in g.edges()]
        offset += g.n
    return Graph(verts, edges)

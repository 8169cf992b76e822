"""Small corpora of bipartite graphs: exhaustive per class, or seeded random.

Graphs are handled in a compact form ``(a, b, rows)``: ``a`` top vertices,
``b`` bottom vertices, and ``rows[i]`` the bitmask of bottom neighbours of
top vertex ``i``.  As a :class:`BipartiteGraph` the tops are labelled
``1..a`` and the bottoms ``a+1..a+b``.
"""

from __future__ import annotations

import random
from concurrent.futures import ProcessPoolExecutor
from typing import Iterator, Optional

from .errors import ArgumentError
from .graph import BipartiteGraph, Graph, iter_bits
from .recognition import ClassSpec, class_violation

Compact = tuple[int, int, tuple[int, ...]]


def to_bipartite(form: Compact) -> BipartiteGraph:
    a, b, rows = form
    top = range(1, a + 1)
    bottom = range(a + 1, a + b + 1)
    edges = [(i + 1, a + 1 + j) for i, row in enumerate(rows) for j in iter_bits(row)]
    return BipartiteGraph.from_edges(top, bottom, edges)


def from_bipartite(g: BipartiteGraph) -> Compact:
    tops, bottoms = list(iter_bits(g.top)), list(iter_bits(g.bottom))
    pos = {v: j for j, v in enumerate(bottoms)}
    rows = tuple(sum(1 << pos[u] for u in iter_bits(g.row(v))) for v in tops)
    return len(tops), len(bottoms), rows


# ---------------------------------------------------------------------------
# canonical form (part-preserving isomorphism)
# ---------------------------------------------------------------------------

def _neighbour_lists(form: Compact) -> list[tuple[int, ...]]:
    a, b, rows = form
    out = [tuple(a + j for j in iter_bits(row)) for row in rows]
    for j in range(b):
        out.append(tuple(i for i in range(a) if rows[i] >> j & 1))
    return out


def _refine(cells: list[list[int]], nbrs) -> list[list[int]]:
    while True:
        where = {v: i for i, cell in enumerate(cells) for v in cell}
        out = []
        for cell in cells:
            if len(cell) == 1:
                out.append(cell)
                continue
            sig = {v: tuple(sorted(where[u] for u in nbrs[v])) for v in cell}
            for s in sorted(set(sig.values())):
                out.append([v for v in cell if sig[v] == s])
        if len(out) == len(cells):
            return out
        cells = out


def canonical_form(form: Compact) -> Compact:
    """Least relabelling reachable by colour refinement and individualisation."""
    a, b, _ = form
    nbrs = _neighbour_lists(form)
    start = {}
    for v in range(a + b):
        start.setdefault((v >= a, len(nbrs[v])), []).append(v)
    cells = [start[k] for k in sorted(start)]

    def leaf(order: list[int]) -> tuple[int, ...]:
        pos = {v: i for i, v in enumerate(order)}
        return tuple(sum(1 << (pos[u] - a) for u in nbrs[v]) for v in order[:a])

    def search(cells) -> tuple[int, ...]:
        cells = _refine(cells, nbrs)
        split = next((i for i, cell in enumerate(cells) if len(cell) > 1), None)
        if split is None:
            return leaf([cell[0] for cell in cells])
        best = None
        tried = set()
        for v in cells[split]:
            # twins give the same leaf; try one per neighbourhood
            if nbrs[v] in tried:
                continue
            tried.add(nbrs[v])
            rest = [u for u in cells[split] if u != v]
            got = search(cells[:split] + [[v], rest] + cells[split + 1:])
            if best is None or got < best:
                best = got
        return best

    return a, b, search(cells)


def canonical_key(g) -> Compact:
    return canonical_form(from_bipartite(g) if isinstance(g, BipartiteGraph) else g)


# ---------------------------------------------------------------------------
# exhaustive enumeration inside a hereditary class
# ---------------------------------------------------------------------------

def _children(job) -> list[tuple[Compact, Compact]]:
    """Canonical forms of ``parent`` plus one top vertex, each with one concrete form."""
    parent = job
    a, b, rows = parent
    out = {}
    for row in range(1 << b):
        form = (a + 1, b, rows + (row,))
        out.setdefault(canonical_form(form), form)
    return sorted(out.items())


def _keep(job) -> bool:
    spec, form = job
    return class_violation(to_bipartite(form), spec, through=form[0]) is None


def _empty_layer(spec: ClassSpec, b: int) -> list[Compact]:
    form = (0, b, ())
    if b and class_violation(to_bipartite(form), spec) is not None:
        return []
    return [form]


def enumerate_class(spec: ClassSpec, max_top: int, max_bottom: Optional[int] = None, *,
                    jobs: int = 1, up_to_swap: bool = False) -> Iterator[BipartiteGraph]:
    """Every graph of a hereditary bipartite class up to part-preserving isomorphism.

    Graphs come out ordered by (bottom size, top size, canonical rows); the
    empty graph is skipped.  Heredity guarantees each graph arises by adding a
    top vertex to an in-class graph with one top vertex fewer.  With
    ``up_to_swap`` only graphs with at most as many top as bottom vertices are
    produced, which covers every graph up to exchanging the parts.
    """
    if max_bottom is None:
        max_bottom = max_top
    if max_top < 0 or max_bottom < 0:
        raise ArgumentError("part sizes must be non-negative")
    pool = ProcessPoolExecutor(jobs) if jobs > 1 else None
    try:
        for b in range(max_bottom + 1):
            layer = _empty_layer(spec, b)
            for a in range(max_top + 1):
                if up_to_swap and a > b:
                    break
                if a:
                    mapped = pool.map(_children, layer, chunksize=16) if pool else map(_children, layer)
                    fresh: dict[Compact, Compact] = {}
                    for kids in mapped:
                        for key, form in kids:
                            fresh.setdefault(key, form)
                    keys = sorted(fresh)
                    checks = [(spec, fresh[k]) for k in keys]
                    verdicts = pool.map(_keep, checks, chunksize=64) if pool else map(_keep, checks)
                    layer = [k for k, ok in zip(keys, verdicts) if ok]
                if a + b:
                    for form in layer:
                        yield to_bipartite(form)
                if not layer:
                    break
    finally:
        if pool is not None:
            pool.shutdown()


def count_class(spec: ClassSpec, max_top: int, max_bottom: Optional[int] = None,
                up_to_swap: bool = False) -> dict[tuple[int, int], int]:
    counts: dict[tuple[int, int], int] = {}
    for g in enumerate_class(spec, max_top, max_bottom, up_to_swap=up_to_swap):
        key = (g.top.bit_count(), g.bottom.bit_count())
        counts[key] = counts.get(key, 0) + 1
    return counts


# ---------------------------------------------------------------------------
# seeded random graphs
# ---------------------------------------------------------------------------

def random_bipartite(rng: random.Random, a: int, b: int, density: float) -> BipartiteGraph:
    rows = tuple(sum(1 << j for j in range(b) if rng.random() < density) for _ in range(a))
    return to_bipartite((a, b, rows))


def random_graph(rng: random.Random, n: int, density: float) -> Graph:
    edges = [(u, v) for u in range(1, n + 1) for v in range(u + 1, n + 1) if rng.random() < density]
    return Graph(range(1, n + 1), edges)


def sample_class(spec: ClassSpec, count: int, max_part: int, seed: int = 0,
                 max_tries: int = 100_000) -> list[BipartiteGraph]:
    """Up to ``count`` random in-class graphs with parts of size 1..max_part."""
    rng = random.Random(seed)
    out = []
    for _ in range(max_tries):
        if len(out) == count:
            break
        g = random_bipartite(rng, rng.randint(1, max_part), rng.randint(1, max_part),
                             rng.choice((0.2, 0.4, 0.6, 0.8)))
        if class_violation(g, spec) is None:
            out.append(g)
    return out

"""Named pattern graphs used as forbidden induced subgraphs.

Bipartite patterns come back as :class:`BipartiteGraph` with the top/bottom
convention of the drawings they are taken from (the upper row of a drawing is
the top part).  Where a figure exists, vertex labels follow the figure's
``x1, x2, ...`` numbering.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from .errors import ArgumentError
from .graph import BipartiteGraph, Graph


@dataclass(frozen=True)
class NamedPattern:
    name: str
    params: tuple[tuple[str, int], ...] = ()

    def param(self, key: str) -> int:
        return dict(self.params)[key]

    def to_json(self) -> dict:
        return {"pattern": self.name, **dict(self.params)}

    @classmethod
    def from_json(cls, obj: dict) -> "NamedPattern":
        obj = dict(obj)
        name = obj.pop("pattern")
        return pattern(name, **obj)

    def __str__(self) -> str:
        if not self.params:
            return self.name
        return f"{self.name}({','.join(str(v) for _, v in self.params)})"


def _bip(top, bottom, edges) -> BipartiteGraph:
    return BipartiteGraph.from_edges(top, bottom, edges)


def _path(k):
    edges = [(i, i + 1) for i in range(1, k)]
    return _bip([v for v in range(1, k + 1) if v % 2], [v for v in range(1, k + 1) if not v % 2], edges)


def _cycle(k):
    if k < 3:
        raise ArgumentError("a cycle needs at least 3 vertices")
    edges = [(i, i + 1) for i in range(1, k)] + [(k, 1)]
    if k % 2:
        return Graph.on(k, edges)
    return _bip([v for v in range(1, k + 1) if v % 2], [v for v in range(1, k + 1) if not v % 2], edges)


def _complete(k):
    return Graph.on(k, [(i, j) for i in range(1, k + 1) for j in range(i + 1, k + 1)])


def _kbip(n, m, complete=True):
    top = list(range(1, n + 1))
    bottom = list(range(n + 1, n + m + 1))
    return _bip(top, bottom, [(a, b) for a in top for b in bottom] if complete else [])


def _spider(i, j, k):
    top, bottom, edges, nxt = [1], [], [], 2
    for length in (i, j, k):
        prev = 1
        for depth in range(1, length + 1):
            (bottom if depth % 2 else top).append(nxt)
            edges.append((prev, nxt))
            prev, nxt = nxt, nxt + 1
    return _bip(top, bottom, edges)


def _double_star(p, q):
    # centres 1 (top) and 2 (bottom); leaves of 1 are bottom, leaves of 2 are top
    leaves1 = list(range(3, 3 + p))
    leaves2 = list(range(3 + p, 3 + p + q))
    edges = [(1, 2)] + [(1, v) for v in leaves1] + [(2, v) for v in leaves2]
    return _bip([1] + leaves2, [2] + leaves1, edges)


def _matching(k):
    return _bip(range(1, 2 * k, 2), range(2, 2 * k + 1, 2), [(2 * i - 1, 2 * i) for i in range(1, k + 1)])


def _q(p):
    a = list(range(1, p + 1))
    z = p + 1
    b = list(range(p + 2, 2 * p + 2))
    w = 2 * p + 2
    edges = [(x, y) for x in a for y in b] + [(w, x) for x in a] + [(w, z)]
    return _bip(b + [w], a + [z], edges)


def _l(s, p, iso_bottom=0):
    pend = list(range(1, s + 1))
    kb = list(range(s + 1, s + p + 1))
    t1, t2 = s + p + 1, s + p + 2
    iso = list(range(s + p + 3, s + p + 3 + iso_bottom))
    edges = [(t, b) for t in (t1, t2) for b in kb] + [(t1, v) for v in pend]
    return _bip([t1, t2], pend + kb + iso, edges)


def _m_family(p, *, star=False, with_w_edge=True):
    b = list(range(1, p + 1))
    leaf = p + 1
    t1, t2, w = p + 2, p + 3, p + 4
    edges = [(t1, x) for x in b]
    if star:
        w = p + 3
        top = [t1, w]
    else:
        edges += [(t2, x) for x in b] + [(t2, leaf)]
        top = [t1, t2, w]
    if with_w_edge:
        edges.append((w, leaf))
    return _bip(top, b + [leaf], edges)


def _kpp_plus(p, iso):
    top = list(range(1, p + 1))
    bottom = list(range(p + 1, 2 * p + 1 + iso))
    return _bip(top, bottom, [(a, b) for a in top for b in range(p + 1, 2 * p + 1)])


def _a_graph():
    # a1=1, a2=2, c=3 on top; b1=4, b2=5, d=6 on bottom
    return _bip([1, 2, 3], [4, 5, 6], [(1, 4), (1, 5), (2, 4), (2, 5), (3, 4), (1, 6)])


_FIXED = {
    "K12+2K2": lambda: _bip([5, 6, 7], [1, 2, 3, 4], [(1, 5), (2, 5), (3, 6), (4, 7)]),
    "P5+K2": lambda: _bip([5, 6, 7], [1, 2, 3, 4], [(1, 5), (2, 5), (3, 6), (4, 7), (6, 2)]),
    "C4+K2": lambda: _bip([4, 5, 6], [1, 2, 3], [(1, 5), (1, 6), (2, 5), (2, 6), (3, 4)]),
    "domino": lambda: _bip([4, 5, 6], [1, 2, 3],
                           [(1, 4), (1, 5), (2, 4), (2, 5), (5, 3), (6, 3), (2, 6)]),
    "K33-e": lambda: _bip([1, 2, 3], [4, 5, 6],
                          [(a, b) for a in (1, 2, 3) for b in (4, 5, 6) if (a, b) != (3, 6)]),
    "2K2": lambda: _matching(2),
    "3K2": lambda: _matching(3),
    "A": _a_graph,
}

_PARAM: dict[str, tuple[tuple[str, ...], Callable]] = {
    "P": (("k",), _path),
    "C": (("k",), _cycle),
    "K": (("k",), _complete),
    "O": (("k",), lambda k: Graph.on(k)),
    "K_bip": (("n", "m"), _kbip),
    "O_bip": (("n", "m"), lambda n, m: _kbip(n, m, complete=False)),
    "S": (("i", "j", "k"), _spider),
    "double_star": (("p", "q"), _double_star),
    "mK2": (("k",), _matching),
    "Q": (("p",), _q),
    "L": (("s", "p"), _l),
    "L+O01": (("s", "p"), lambda s, p: _l(s, p, iso_bottom=1)),
    "K2p+O01": (("p",), lambda p: _l(0, p, iso_bottom=1)),
    "M": (("p",), _m_family),
    "N": (("p",), lambda p: _m_family(p, with_w_edge=False)),
    "M*": (("p",), lambda p: _m_family(p, star=True)),
    "N*": (("p",), lambda p: _m_family(p, star=True, with_w_edge=False)),
    "Kpp+K1": (("p",), lambda p: _kpp_plus(p, 1)),
    "Kpp+O0p": (("p",), lambda p: _kpp_plus(p, p)),
}

# parameters allowed to be zero
_ZERO_OK = {("O_bip", "n"), ("O_bip", "m"), ("O", "k")}


def pattern(name: str, /, **params: int) -> NamedPattern:
    """Build and validate a :class:`NamedPattern`."""
    if name in _FIXED:
        if params:
            raise ArgumentError(f"pattern {name} takes no parameters")
        return NamedPattern(name)
    if name not in _PARAM:
        raise ArgumentError(f"unknown pattern {name!r}")
    keys, _ = _PARAM[name]
    if set(params) != set(keys):
        raise ArgumentError(f"pattern {name} needs parameters {keys}, got {sorted(params)}")
    for k in keys:
        v = params[k]
        if not isinstance(v, int) or v < 0 or (v == 0 and (name, k) not in _ZERO_OK):
            raise ArgumentError(f"pattern {name}: parameter {k}={v!r} out of range")
    return NamedPattern(name, tuple((k, params[k]) for k in keys))


def instantiate(p: NamedPattern | str, /, **params: int) -> Graph | BipartiteGraph:
    if isinstance(p, str):
        p = pattern(p, **params)
    if p.name in _FIXED:
        return _FIXED[p.name]()
    keys, build = _PARAM[p.name]
    return build(*(dict(p.params)[k] for k in keys))


def pattern_names() -> list[str]:
    return sorted(list(_FIXED) + list(_PARAM))

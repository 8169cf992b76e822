"""Class identifiers used by the certificate finders, with their parameters."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

from ..errors import ArgumentError
from ..graph import BipartiteGraph, bipartite_complement
from ..patterns import pattern
from ..recognition import ClassSpec, class_violation, free

SIDES = ("top", "bottom")


def _chord(k: Optional[int]) -> Optional[int]:
    return None if k is None else k + 1


def _p7(*extra) -> ClassSpec:
    return free(pattern("P", k=7), *extra, bipartite=True)


def _one_sided(name: str, p: int, sides: str) -> ClassSpec:
    chosen = [s for s in sides.split("+") if s]
    if not chosen or any(s not in SIDES for s in chosen):
        raise ArgumentError(f"sides must be 'top', 'bottom' or 'top+bottom', got {sides!r}")
    return free(bipartite=True, one_sided=[(pattern(name, p=p), s) for s in chosen])


@dataclass(frozen=True)
class ClassInfo:
    class_id: str
    params: tuple[str, ...]          # all accepted parameters, in order
    required: tuple[str, ...]        # parameters without a default
    build: Callable[..., ClassSpec]
    summary: str
    primary: bool = True             # accepted by the command line


_REGISTRY: dict[str, ClassInfo] = {}


def _register(class_id, params, required, build, summary, primary=True):
    _REGISTRY[class_id] = ClassInfo(class_id, params, required, build, summary, primary)


_register("kpp-chordality", ("p", "k"), ("p",),
          lambda p, k=None: free(pattern("K_bip", n=p, m=p), bipartite=True, chordality_lt=_chord(k)),
          "K_{p,p}-free bipartite graphs with chordless cycles of length at most k")
_register("kpp-plus-k1", ("p", "k"), ("p",),
          lambda p, k=None: free(pattern("Kpp+K1", p=p), bipartite=True, chordality_lt=_chord(k)),
          "(K_{p,p}+K_1)-free bipartite graphs of chordality at most k")
_register("Qp", ("p", "k"), ("p",),
          lambda p, k=None: free(pattern("Q", p=p), bipartite=True, chordality_lt=_chord(k)),
          "Q(p)-free bipartite graphs of chordality at most k")
_register("L-plus-O01", ("s", "p", "k"), ("s", "p"),
          lambda s, p, k=None: free(pattern("L+O01", s=s, p=p), bipartite=True, chordality_lt=_chord(k)),
          "(L(s,p)+O_{0,1})-free bipartite graphs of chordality at most k")
_register("Mp", ("p", "k"), ("p",),
          lambda p, k=None: free(pattern("M", p=p), bipartite=True, chordality_lt=_chord(k)),
          "M(p)-free bipartite graphs of chordality at most k")
_register("Np", ("p", "k"), ("p",),
          lambda p, k=None: free(pattern("N", p=p), bipartite=True, chordality_lt=_chord(k)),
          "N(p)-free bipartite graphs of chordality at most k")
_register("A-graph", ("k",), (),
          lambda k=None: free(pattern("A"), bipartite=True, chordality_lt=_chord(k)),
          "A-free bipartite graphs of chordality at most k")
_register("P7-Spp", ("p",), ("p",), lambda p: _p7(pattern("double_star", p=p, q=p)),
          "(P7, S_{p,p})-free bipartite graphs")
_register("P7-KppO0p", ("p",), ("p",), lambda p: _p7(pattern("Kpp+O0p", p=p)),
          "(P7, K_{p,p}+O_{0,p})-free bipartite graphs")
_register("P7-K12-2K2", (), (), lambda: _p7(pattern("K12+2K2")), "(P7, K_{1,2}+2K_2)-free bipartite graphs")
_register("P7-P5K2", (), (), lambda: _p7(pattern("P5+K2")), "(P7, P5+K2)-free bipartite graphs")
_register("P7-C4K2", (), (), lambda: _p7(pattern("C4+K2")), "(P7, C4+K2)-free bipartite graphs")
_register("P7-domino", (), (), lambda: _p7(pattern("domino")), "(P7, domino)-free bipartite graphs")
_register("P7-K33e", (), (), lambda: _p7(pattern("K33-e")), "(P7, K_{3,3}-e)-free bipartite graphs")
_register("chain", (), (), lambda: free(pattern("2K2"), bipartite=True), "2K2-free bipartite graphs")
_register("2k2-c4-structure", (), (), lambda: free(pattern("2K2"), pattern("C", k=4), bipartite=True),
          "(2K2, C4)-free bipartite graphs")

# classes that only appear as tags on parts or as reduction targets
_register("biclique", (), (), lambda: free(pattern("O_bip", n=1, m=1), bipartite=True),
          "complete bipartite graphs", primary=False)
_register("bc-maxdeg1", (), (), lambda: free(pattern("O_bip", n=1, m=2), bipartite=True),
          "bipartite graphs whose bipartite complement has maximum degree 1", primary=False)
_register("Mstar-free", ("p",), ("p",), lambda p: free(pattern("M*", p=p), bipartite=True),
          "M*(p)-free bipartite graphs", primary=False)
_register("Mstar-one-sided", ("p", "sides"), ("p", "sides"), lambda p, sides: _one_sided("M*", p, sides),
          "no one-sided M*(p) with its larger part in the given sides", primary=False)
_register("Nstar-free", ("p",), ("p",), lambda p: free(pattern("N*", p=p), bipartite=True),
          "N*(p)-free bipartite graphs", primary=False)
_register("Nstar-one-sided", ("p", "sides"), ("p", "sides"), lambda p, sides: _one_sided("N*", p, sides),
          "no one-sided N*(p) with its larger part in the given sides", primary=False)
_register("P6C6", (), (), lambda: free(pattern("P", k=6), pattern("C", k=6), bipartite=True),
          "(P6, C6)-free bipartite graphs", primary=False)
_register("P7-C6", (), (), lambda: _p7(pattern("C", k=6)), "(P7, C6)-free bipartite graphs", primary=False)
_register("P7-Opp", ("p",), ("p",), lambda p: _p7(pattern("O_bip", n=p, m=p)),
          "(P7, O_{p,p})-free bipartite graphs", primary=False)
_register("P7-3K2", (), (), lambda: _p7(pattern("3K2")), "(P7, 3K2)-free bipartite graphs", primary=False)


def class_ids(primary_only: bool = False) -> list[str]:
    return sorted(c for c, info in _REGISTRY.items() if info.primary or not primary_only)


def class_info(class_id: str) -> ClassInfo:
    try:
        return _REGISTRY[class_id]
    except KeyError:
        raise ArgumentError(f"unknown class {class_id!r}; known: {', '.join(class_ids())}") from None


def normalize_params(class_id: str, params: dict | None) -> tuple[tuple[str, object], ...]:
    """Validate parameters and drop unset optional ones; returns a hashable tuple."""
    info = class_info(class_id)
    params = {k: v for k, v in (params or {}).items() if v is not None}
    extra = set(params) - set(info.params)
    if extra:
        raise ArgumentError(f"class {class_id} does not take {sorted(extra)}")
    missing = [k for k in info.required if k not in params]
    if missing:
        raise ArgumentError(f"class {class_id} needs {missing}")
    for key, val in params.items():
        if key == "sides":
            continue
        if not isinstance(val, int) or isinstance(val, bool):
            raise ArgumentError(f"{key} must be an integer")
        low = 3 if key == "k" else 1
        if val < low:
            raise ArgumentError(f"{key}={val} is below the minimum {low}")
    return tuple((k, params[k]) for k in info.params if k in params)


@dataclass(frozen=True)
class ClassRef:
    """A class with concrete parameters, optionally applied to the bipartite complement."""

    class_id: str
    params: tuple[tuple[str, object], ...] = ()
    complemented: bool = False

    @classmethod
    def make(cls, class_id: str, complemented: bool = False, **params) -> "ClassRef":
        return cls(class_id, normalize_params(class_id, params), complemented)

    def param(self, key: str, default=None):
        return dict(self.params).get(key, default)

    def spec(self) -> ClassSpec:
        info = class_info(self.class_id)
        return info.build(**dict(self.params))

    def violation(self, g: BipartiteGraph):
        host = bipartite_complement(g) if self.complemented else g
        return class_violation(host, self.spec())

    def holds(self, g: BipartiteGraph) -> bool:
        return self.violation(g) is None

    def to_json(self) -> dict:
        out: dict = {"class": self.class_id, "params": dict(self.params)}
        if self.complemented:
            out["complemented"] = True
        return out

    @classmethod
    def from_json(cls, obj: dict) -> "ClassRef":
        try:
            return cls.make(obj["class"], bool(obj.get("complemented", False)), **obj.get("params", {}))
        except (KeyError, TypeError) as exc:
            raise ArgumentError(f"malformed class reference {obj!r}") from exc

    def __str__(self) -> str:
        body = ",".join(f"{k}={v}" for k, v in self.params)
        text = f"{self.class_id}({body})" if body else self.class_id
        return f"co-{text}" if self.complemented else text

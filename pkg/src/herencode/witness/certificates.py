"""Structural certificates, their JSON form, and an independent verifier."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional, Union

from ..errors import ArgumentError, DecodeError
from ..graph import BipartiteGraph, Graph, bipartite_complement, bits_to_list, to_mask
from ..labeling import Covering, Peeling
from ..modular import decompose
from .classes import ClassRef

DEGREE = "degree"
CO_DEGREE = "co-degree"
BIPARTITE_CO_DEGREE = "bipartite-co-degree"
SIDE_KINDS = (DEGREE, CO_DEGREE, BIPARTITE_CO_DEGREE)


def stated_delta_bound(ref: ClassRef | None) -> Optional[int]:
    """The symmetric-difference bound each class's lemma promises."""
    if ref is None:
        return None
    fixed = {"chain": 1, "P7-K12-2K2": 2, "P7-P5K2": 4, "P7-C4K2": 8}
    if ref.class_id in fixed:
        return fixed[ref.class_id]
    if ref.class_id == "L-plus-O01":
        return 2 * (ref.param("s") - 1)
    return None


@dataclass(frozen=True)
class LowDegree:
    vertex: int
    bound: int
    side: str = DEGREE
    of: Optional[ClassRef] = None
    claims_checked: tuple[str, ...] = ()
    kind = "low-degree"


@dataclass(frozen=True)
class LowDegreeList:
    """Every vertex outside ``exceptions`` has degree at most ``bound``.

    ``exceptions`` holds at most one vertex per part; ``shared`` maps a part
    ("top"/"bottom") to the common neighbour of its degree-one vertices.
    """

    vertices: tuple[int, ...]
    bound: int
    exceptions: tuple[int, ...] = ()
    shared: tuple[tuple[str, int], ...] = ()
    of: Optional[ClassRef] = None
    claims_checked: tuple[str, ...] = ()
    kind = "low-degree-list"


@dataclass(frozen=True)
class Delta:
    x: int
    y: int
    delta: tuple[int, ...]
    bound: int
    same_part: bool = False
    of: Optional[ClassRef] = None
    claims_checked: tuple[str, ...] = ()
    kind = "delta"

    @property
    def achieved(self) -> int:
        return len(self.delta)


@dataclass(frozen=True)
class Part:
    vertices: tuple[int, ...]
    tag: ClassRef


@dataclass(frozen=True)
class Cover:
    parts: tuple[Part, ...]
    multiplicity: int
    of: Optional[ClassRef] = None
    claims_checked: tuple[str, ...] = ()
    kind = "cover"


@dataclass(frozen=True)
class Layer:
    vertices: tuple[int, ...]
    inner: Union[ClassRef, "Certificate"]


@dataclass(frozen=True)
class Peel:
    layers: tuple[Layer, ...]
    d: int
    of: Optional[ClassRef] = None
    claims_checked: tuple[str, ...] = ()
    kind = "peel"


@dataclass(frozen=True)
class Reduce:
    target: ClassRef
    of: Optional[ClassRef] = None
    claims_checked: tuple[str, ...] = ()
    kind = "reduce"


@dataclass(frozen=True)
class PrimePiece:
    vertices: tuple[int, ...]
    certificate: "Certificate"


@dataclass(frozen=True)
class Modular:
    """One certificate per prime node, each on the node's representative vertices."""

    pieces: tuple[PrimePiece, ...]
    of: Optional[ClassRef] = None
    claims_checked: tuple[str, ...] = ()
    kind = "modular"


Certificate = Union[LowDegree, LowDegreeList, Delta, Cover, Peel, Reduce, Modular]


# ---------------------------------------------------------------------------
# JSON
# ---------------------------------------------------------------------------

def _of(cert) -> dict:
    return {"class": cert.of.to_json()} if cert.of is not None else {}


def certificate_to_json(cert: Certificate) -> dict:
    head = {"kind": cert.kind, **_of(cert)}
    if isinstance(cert, LowDegree):
        body = {"vertex": cert.vertex, "bound": cert.bound, "side": cert.side}
    elif isinstance(cert, LowDegreeList):
        body = {"vertices": list(cert.vertices), "bound": cert.bound, "exceptions": list(cert.exceptions),
                "shared": dict(cert.shared)}
    elif isinstance(cert, Delta):
        body = {"x": cert.x, "y": cert.y, "delta": list(cert.delta), "bound": cert.bound,
                "achieved": cert.achieved, "same_part": cert.same_part}
    elif isinstance(cert, Cover):
        body = {"parts": [{"vertices": list(p.vertices), "tag": p.tag.to_json()} for p in cert.parts],
                "multiplicity": cert.multiplicity}
    elif isinstance(cert, Peel):
        body = {"d": cert.d, "layers": [
            {"vertices": list(layer.vertices),
             "inner": (layer.inner.to_json() if isinstance(layer.inner, ClassRef)
                       else certificate_to_json(layer.inner))}
            for layer in cert.layers]}
    elif isinstance(cert, Reduce):
        body = {"target": cert.target.to_json()}
    elif isinstance(cert, Modular):
        body = {"pieces": [{"vertices": list(p.vertices), "certificate": certificate_to_json(p.certificate)}
                           for p in cert.pieces]}
    else:
        raise ArgumentError(f"not a certificate: {cert!r}")
    return {**head, **body, "claims_checked": list(cert.claims_checked)}


def certificate_from_json(obj) -> Certificate:
    if isinstance(obj, (str, bytes)):
        obj = json.loads(obj)
    try:
        kind = obj["kind"]
        of = ClassRef.from_json(obj["class"]) if "class" in obj else None
        claims = tuple(str(c) for c in obj.get("claims_checked", ()))
        common = {"of": of, "claims_checked": claims}
        if kind == "low-degree":
            if obj["side"] not in SIDE_KINDS:
                raise DecodeError(f"unknown side {obj['side']!r}")
            return LowDegree(int(obj["vertex"]), int(obj["bound"]), obj["side"], **common)
        if kind == "low-degree-list":
            return LowDegreeList(tuple(obj["vertices"]), int(obj["bound"]), tuple(obj["exceptions"]),
                                 tuple(sorted(obj["shared"].items())), **common)
        if kind == "delta":
            return Delta(int(obj["x"]), int(obj["y"]), tuple(obj["delta"]), int(obj["bound"]),
                         bool(obj.get("same_part", False)), **common)
        if kind == "cover":
            parts = tuple(Part(tuple(p["vertices"]), ClassRef.from_json(p["tag"])) for p in obj["parts"])
            return Cover(parts, int(obj["multiplicity"]), **common)
        if kind == "peel":
            layers = []
            for layer in obj["layers"]:
                inner = layer["inner"]
                inner = certificate_from_json(inner) if "kind" in inner else ClassRef.from_json(inner)
                layers.append(Layer(tuple(layer["vertices"]), inner))
            return Peel(tuple(layers), int(obj["d"]), **common)
        if kind == "reduce":
            return Reduce(ClassRef.from_json(obj["target"]), **common)
        if kind == "modular":
            return Modular(tuple(PrimePiece(tuple(p["vertices"]), certificate_from_json(p["certificate"]))
                                 for p in obj["pieces"]), **common)
    except (KeyError, TypeError, ValueError, AttributeError, ArgumentError) as exc:
        raise DecodeError(f"malformed certificate: {exc}") from None
    raise DecodeError(f"unknown certificate kind {kind!r}")


# ---------------------------------------------------------------------------
# verification
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Verification:
    ok: bool
    reason: str = ""

    def __bool__(self) -> bool:
        return self.ok


_OK = Verification(True)


def _fail(reason: str) -> Verification:
    return Verification(False, reason)


def _as_bipartite(g) -> BipartiteGraph:
    if isinstance(g, BipartiteGraph):
        return g
    return BipartiteGraph.from_graph(g)


def _subset(g: BipartiteGraph, vertices) -> Optional[int]:
    mask = to_mask(vertices)
    if mask & ~g.graph.vertex_mask or mask.bit_count() != len(vertices):
        return None
    return mask


def _check_tag(g: BipartiteGraph, tag: ClassRef, where: str) -> Verification:
    bad = tag.violation(g)
    if bad is not None:
        reason, verts = bad
        return _fail(f"{where} is not in {tag}: {reason} {list(verts)}".rstrip())
    return _OK


def _measure(g: BipartiteGraph, v: int, side: str) -> int:
    row = g.row(v)
    if side == DEGREE:
        return row.bit_count()
    if side == CO_DEGREE:
        return (g.graph.vertex_mask & ~row & ~(1 << v)).bit_count()
    return g.bipartite_codegree(v)


def verify_certificate(g, cert: Certificate) -> Verification:
    """Recheck ``cert`` against ``g`` from scratch; never raises on bad certificates."""
    try:
        g = _as_bipartite(g)
    except Exception as exc:  # noqa: BLE001 - a non-bipartite input is just a failed check
        return _fail(str(exc))
    try:
        return _verify(g, cert)
    except (ArgumentError, DecodeError) as exc:
        return _fail(str(exc))


def _verify(g: BipartiteGraph, cert: Certificate) -> Verification:
    if isinstance(cert, LowDegree):
        if cert.vertex not in g.graph:
            return _fail(f"vertex {cert.vertex} is not in the graph")
        if cert.side not in SIDE_KINDS:
            return _fail(f"unknown side {cert.side!r}")
        got = _measure(g, cert.vertex, cert.side)
        if got > cert.bound:
            return _fail(f"vertex {cert.vertex} has {cert.side} {got} > {cert.bound}")
        return _OK

    if isinstance(cert, LowDegreeList):
        listed = set(cert.vertices) | set(cert.exceptions)
        if listed != set(g.vertices) or set(cert.vertices) & set(cert.exceptions):
            return _fail("listed vertices and exceptions must partition the vertex set")
        for side_mask in (g.top, g.bottom):
            if sum(1 for v in cert.exceptions if side_mask >> v & 1) > 1:
                return _fail("more than one exception in a part")
        for v in cert.vertices:
            if g.row(v).bit_count() > cert.bound:
                return _fail(f"vertex {v} has degree {g.row(v).bit_count()} > {cert.bound}")
        shared = dict(cert.shared)
        for name, mask in (("top", g.top), ("bottom", g.bottom)):
            ones = [v for v in cert.vertices if mask >> v & 1 and g.row(v).bit_count() == 1]
            if ones and (name not in shared or any(g.row(v) != 1 << shared[name] for v in ones)):
                return _fail(f"degree-one vertices of the {name} part do not share a neighbour")
        return _OK

    if isinstance(cert, Delta):
        if cert.x == cert.y or cert.x not in g.graph or cert.y not in g.graph:
            return _fail("the pair must be two distinct vertices of the graph")
        actual = bits_to_list(g.row(cert.x) ^ g.row(cert.y))
        if actual != sorted(cert.delta):
            return _fail(f"recorded symmetric difference {list(cert.delta)} differs from {actual}")
        if len(actual) > cert.bound:
            return _fail(f"symmetric difference has size {len(actual)} > bound {cert.bound}")
        stated = stated_delta_bound(cert.of)
        if stated is not None and cert.bound > stated:
            return _fail(f"bound {cert.bound} exceeds the stated bound {stated} for {cert.of}")
        if cert.same_part and g.side(cert.x) != g.side(cert.y):
            return _fail("the pair is not inside one part")
        return _OK

    if isinstance(cert, Cover):
        masks = []
        for i, part in enumerate(cert.parts):
            m = _subset(g, part.vertices)
            if m is None:
                return _fail(f"part {i} lists vertices outside the graph or repeats one")
            masks.append(m)
        cov = Covering([g.graph.induced(m) for m in masks])
        problems = cov.problems(g.graph)
        if problems:
            return _fail(problems[0])
        if cov.multiplicity > cert.multiplicity:
            return _fail(f"multiplicity {cov.multiplicity} exceeds the recorded {cert.multiplicity}")
        for i, (part, m) in enumerate(zip(cert.parts, masks)):
            r = _check_tag(g.induced(m), part.tag, f"part {i}")
            if not r:
                return r
        return _OK

    if isinstance(cert, Peel):
        masks = []
        for i, layer in enumerate(cert.layers):
            m = _subset(g, layer.vertices)
            if m is None:
                return _fail(f"layer {i} lists vertices outside the graph or repeats one")
            masks.append(m)
        problems = Peeling(masks, cert.d).problems(g)
        if problems:
            return _fail(problems[0])
        for i, (layer, m) in enumerate(zip(cert.layers, masks)):
            sub = g.induced(m)
            if isinstance(layer.inner, ClassRef):
                r = _check_tag(sub, layer.inner, f"layer {i}")
            else:
                r = _verify(sub, layer.inner)
                if not r:
                    r = _fail(f"layer {i}: {r.reason}")
            if not r:
                return r
        return _OK

    if isinstance(cert, Reduce):
        return _check_tag(g, cert.target, "the graph")

    if isinstance(cert, Modular):
        expected = prime_representatives(g.graph)
        got = [tuple(sorted(p.vertices)) for p in cert.pieces]
        if got != expected:
            return _fail(f"prime pieces {got} do not match the decomposition {expected}")
        for piece in cert.pieces:
            r = _verify(g.induced(to_mask(piece.vertices)), piece.certificate)
            if not r:
                return _fail(f"prime piece {list(piece.vertices)}: {r.reason}")
        return _OK

    return _fail(f"unknown certificate type {type(cert).__name__}")


def prime_representatives(g: Graph) -> list[tuple[int, ...]]:
    """For each prime node (pre-order), the least vertex of every child."""
    out = []
    for node in decompose(g).walk():
        if node.kind == "prime":
            out.append(tuple(sorted(child.min_label for child in node.children)))
    return out


def complement_if(g: BipartiteGraph, flag: bool) -> BipartiteGraph:
    return bipartite_complement(g) if flag else g

"""Turn structural certificates into concrete adjacency labeling schemes.

Certificates whose structure only yields a counting bound (a small symmetric
difference, or a modular reduction) produce a :class:`SuccinctPlan` instead.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from ..errors import CertificateInvalidError
from ..graph import BipartiteGraph, bipartite_complement, to_mask
from ..labeling import (Covering, LabelingScheme, Peeling, combine_covering, combine_peeling,
                        degeneracy_order, label_biclique, label_by_degeneracy, wrap_bipartite_complement)
from .certificates import (Cover, Delta, LowDegree, LowDegreeList, Modular, Peel, Reduce,
                           verify_certificate)
from .classes import ClassRef
from .finders import FINDERS, as_bipartite, find_certificate


@dataclass(frozen=True)
class SuccinctPlan:
    """No explicit labels: the class is handled by a succinct (counting) argument."""

    reason: str

    def to_json(self) -> dict:
        return {"plan": "succinct", "reason": self.reason}


Outcome = Union[LabelingScheme, SuccinctPlan]


def observed_degeneracy(g: BipartiteGraph) -> int:
    """Least d for which a bipartite degeneracy order exists."""
    for d in range(g.n + 1):
        if degeneracy_order(g, d, bipartite=True) is not None:
            return d
    return g.n


def _by_degeneracy(g: BipartiteGraph) -> LabelingScheme:
    return label_by_degeneracy(g, observed_degeneracy(g), bipartite=True)


def _tag_scheme(sub: BipartiteGraph, tag: ClassRef) -> Outcome:
    host = bipartite_complement(sub) if tag.complemented else sub
    cid = tag.class_id
    if cid == "biclique":
        out: Outcome = label_biclique(host, host.top)
    elif cid == "bc-maxdeg1":
        out = label_by_degeneracy(host, 1, bipartite=True)
    elif cid == "P7-Opp":
        co = bipartite_complement(host)
        out = wrap_bipartite_complement(host, _by_degeneracy(co))
    elif cid in FINDERS:
        params = dict(tag.params)
        cert = find_certificate(host, cid, params, check_membership=False)
        out = _build(host, cert)
    else:
        return SuccinctPlan(f"no explicit labeling for parts tagged {tag}")
    if tag.complemented and isinstance(out, LabelingScheme):
        out = wrap_bipartite_complement(sub, out)
    return out


def _build(g: BipartiteGraph, cert) -> Outcome:
    if isinstance(cert, (LowDegree, LowDegreeList)):
        return _by_degeneracy(g)
    if isinstance(cert, Delta):
        return SuccinctPlan(f"{cert.of}: bounded symmetric difference gives a counting bound only")
    if isinstance(cert, Modular):
        return SuccinctPlan(f"{cert.of}: prime pieces are encoded through the modular decomposition")
    if isinstance(cert, Reduce):
        return _tag_scheme(g, cert.target)
    if isinstance(cert, Cover):
        subs = []
        for part in cert.parts:
            got = _tag_scheme(g.induced(to_mask(part.vertices)), part.tag)
            if isinstance(got, SuccinctPlan):
                return got
            subs.append(got)
        cov = Covering([g.graph.induced(to_mask(p.vertices)) for p in cert.parts])
        return combine_covering(cov, subs, g.n)
    if isinstance(cert, Peel):
        masks = [to_mask(layer.vertices) for layer in cert.layers]
        built = []
        for layer, mask in zip(cert.layers, masks):
            sub = g.induced(mask)
            got = _tag_scheme(sub, layer.inner) if isinstance(layer.inner, ClassRef) else _build(sub, layer.inner)
            if isinstance(got, SuccinctPlan):
                return got
            built.append(got)
        return combine_peeling(g, Peeling(masks, cert.d), lambda _sub, i: built[i])
    raise CertificateInvalidError(f"unknown certificate type {type(cert).__name__}")


def certificate_to_scheme(g, cert, *, verify: bool = True) -> Outcome:
    """Labels for ``g`` assembled along ``cert``, or the succinct plan it implies."""
    g = as_bipartite(g)
    if verify:
        check = verify_certificate(g, cert)
        if not check:
            raise CertificateInvalidError(check.reason)
    return _build(g, cert)



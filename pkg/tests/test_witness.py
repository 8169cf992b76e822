import json

import pytest

from herencode.corpus import enumerate_class
from herencode.errors import (ArgumentError, CertificateInvalidError, ClaimViolated, DecodeError,
                              NotInClassError, PreconditionMissing)
from herencode.graph import BipartiteGraph, Graph, to_mask
from herencode.labeling import LabelingScheme
from herencode.patterns import instantiate
from herencode.recognition import contains_induced
from herencode.witness import (ClassRef, SuccinctPlan, biclique_partition, certificate_to_scheme,
                               class_ids, find_certificate, maximum_induced_matching)
from herencode.witness.certificates import (Cover, Delta, LowDegree, Part, Peel, Reduce,
                                            certificate_from_json, certificate_to_json,
                                            verify_certificate)

from conftest import bipartite_graphs, to_nx

K44 = instantiate("K_bip", n=4, m=4)


def k44_plus(extra_top=(), extra_bottom=(), edges=()):
    return BipartiteGraph.from_edges([1, 2, 3, 4, *extra_top], [5, 6, 7, 8, *extra_bottom],
                                     list(K44.graph.edges()) + list(edges))


def three_k2_plus_v():
    # tops x1..x3 = 1..3, bottoms y1..y3 = 4..6, and v = 7 joined to x1 and x2
    return BipartiteGraph.from_edges([1, 2, 3], [4, 5, 6, 7], [(1, 4), (2, 5), (3, 6), (1, 7), (2, 7)])


def spp_instance():
    # K_{2,2} on {1,2}x{5,6} with one pendant on each side and a separate edge; S_{2,2}-free and P7-free
    return BipartiteGraph.from_edges([1, 2, 3, 4], [5, 6, 7, 8],
                                     [(1, 5), (1, 6), (2, 5), (2, 6), (1, 7), (3, 5), (4, 8)])


# -- biclique partition -------------------------------------------------------

def test_partition_of_k44():
    bp = biclique_partition(K44, 2)
    assert bp.top_core == K44.top and bp.bottom_core == K44.bottom
    assert not (bp.top_touching | bp.bottom_touching | bp.top_detached | bp.bottom_detached)


def test_pendant_lands_in_bottom_far():
    g = k44_plus(extra_bottom=[9], edges=[(1, 9)])
    bp = biclique_partition(g, 2)
    assert bp.bottom_far == 1 << 9
    cells = bp.cells()
    flat = [v for vs in cells.values() for v in vs]
    assert sorted(flat) == list(g.vertices)


def test_partition_needs_a_big_biclique():
    with pytest.raises(PreconditionMissing):
        biclique_partition(instantiate("K_bip", n=3, m=3), 2)


# -- finder examples ----------------------------------------------------------

def test_qp_on_k44_is_a_single_biclique_layer():
    cert = find_certificate(K44, "Qp", p=2)
    assert isinstance(cert, Peel) and len(cert.layers) == 1
    assert cert.layers[0].inner == ClassRef.make("biclique")
    assert verify_certificate(K44, cert)


def test_three_matching_with_a_pair_vertex():
    cert = find_certificate(three_k2_plus_v(), "P7-K12-2K2")
    assert isinstance(cert, Delta)
    assert (cert.x, cert.y, cert.delta) == (1, 2, (4, 5))
    assert cert.achieved == 2 and verify_certificate(three_k2_plus_v(), cert)


def test_fabricated_far_vertex_violates_claim_one():
    g = k44_plus(extra_top=[9], edges=[(9, 5)])
    assert contains_induced(g, instantiate("Q", p=2)) is not None
    with pytest.raises(NotInClassError):
        find_certificate(g, "Qp", p=2)
    with pytest.raises(ClaimViolated) as info:
        find_certificate(g, "Qp", p=2, check_membership=False)
    assert info.value.claim == "1"


def test_small_inputs_reduce():
    c6 = instantiate("C", k=6)
    cert = find_certificate(c6, "Qp", p=2)
    assert isinstance(cert, Reduce) and cert.target.class_id == "kpp-chordality"
    assert verify_certificate(c6, cert)


def test_l_plus_o01_delta():
    # K_{2,2} plus an isolated bottom vertex, and one private pendant at a top vertex
    g = BipartiteGraph.from_edges([1, 2], [3, 4, 5, 6], [(1, 3), (1, 4), (2, 3), (2, 4), (1, 6)])
    cert = find_certificate(g, "L-plus-O01", s=2, p=2)
    assert isinstance(cert, Delta) and cert.bound == 2 and cert.delta == (6,)


def test_chain_and_structure():
    chain = BipartiteGraph.from_edges([1, 2, 3], [4, 5, 6], [(1, 4), (1, 5), (1, 6), (2, 4), (2, 5), (3, 4)])
    cert = find_certificate(chain, "chain")
    assert isinstance(cert, Delta) and cert.achieved <= 1 and verify_certificate(chain, cert)
    star = BipartiteGraph.from_edges([1], [2, 3, 4], [(1, 2), (1, 3), (1, 4)])
    cert = find_certificate(star, "2k2-c4-structure")
    assert cert.exceptions == (1,) and verify_certificate(star, cert)
    with pytest.raises(PreconditionMissing):
        find_certificate(BipartiteGraph.from_edges([1], [2], [(1, 2)]), "chain")


def test_finder_errors():
    with pytest.raises(PreconditionMissing):
        find_certificate(K44, "biclique")
    with pytest.raises(ArgumentError):
        find_certificate(BipartiteGraph.from_edges([], []), "chain")
    with pytest.raises(ArgumentError):
        find_certificate(K44, "no-such-class")
    with pytest.raises(ArgumentError):
        find_certificate(K44, "Qp")


def test_plain_graph_input_is_two_coloured():
    cert = find_certificate(Graph.on(4, [(1, 2), (2, 3), (3, 4)]), "chain")
    assert verify_certificate(Graph.on(4, [(1, 2), (2, 3), (3, 4)]), cert)


def test_maximum_induced_matching_against_networkx():
    import itertools

    import networkx as nx

    for g in [three_k2_plus_v(), instantiate("P", k=7), instantiate("C", k=6), K44]:
        m = maximum_induced_matching(g)
        h = to_nx(g)
        # induced: endpoints of different edges are non-adjacent
        for (a, b), (c, d) in itertools.combinations(m, 2):
            assert not any(h.has_edge(x, y) for x in (a, b) for y in (c, d))
        # maximum: no induced matching one larger (brute force over edge subsets)
        edges = list(h.edges())
        bigger = any(
            all(not h.has_edge(x, y) for (a, b), (c, d) in itertools.combinations(s, 2)
                for x in (a, b) for y in (c, d)) and len({v for e in s for v in e}) == 2 * len(s)
            for s in itertools.combinations(edges, len(m) + 1))
        assert not bigger


# -- verification negatives ---------------------------------------------------

def test_tampered_bound_fails():
    g = three_k2_plus_v()
    cert = find_certificate(g, "P7-K12-2K2")
    tight = Delta(cert.x, cert.y, cert.delta, 1, True, cert.of, cert.claims_checked)
    assert not verify_certificate(g, tight)
    loose = Delta(cert.x, cert.y, cert.delta, 3, True, cert.of, cert.claims_checked)
    assert "stated" in verify_certificate(g, loose).reason


def test_cover_missing_an_edge():
    g = instantiate("P", k=4)
    tag = ClassRef.make("chain")
    cover = Cover((Part((1, 2), tag), Part((3, 4), tag), Part((2, 3), tag)), 2)
    assert verify_certificate(g, cover)
    broken = Cover((Part((1, 2), tag), Part((3, 4), tag)), 2)
    check = verify_certificate(g, broken)
    assert not check and "edge uncovered" in check.reason


def test_wrong_low_degree_and_reduce():
    g = K44
    assert not verify_certificate(g, LowDegree(1, 3))
    assert verify_certificate(g, LowDegree(1, 4))
    # the bipartite complement O_{4,4} is a chain graph but not a biclique
    assert verify_certificate(g, Reduce(ClassRef.make("chain", complemented=True)))
    assert not verify_certificate(g, Reduce(ClassRef.make("biclique", complemented=True)))
    assert verify_certificate(g, Reduce(ClassRef.make("biclique")))


def test_peel_with_bad_layers():
    g = spp_instance()
    good = find_certificate(g, "P7-Spp", p=2)
    assert verify_certificate(g, good)
    assert "cover" in verify_certificate(g, Peel(good.layers[:-1], good.d, good.of)).reason
    tight = Peel(good.layers, 0, good.of)
    assert not verify_certificate(g, tight)


# -- JSON ---------------------------------------------------------------------

@pytest.mark.parametrize("g,cid,params", [
    (K44, "Qp", {"p": 2}),
    (three_k2_plus_v(), "P7-K12-2K2", {}),
    (instantiate("C", k=6), "P7-domino", {}),
    (instantiate("K_bip", n=2, m=3), "P7-Spp", {"p": 2}),
    (instantiate("K_bip", n=1, m=3), "2k2-c4-structure", {}),
    (instantiate("C", k=6), "A-graph", {}),
])
def test_certificate_json_round_trip(g, cid, params):
    cert = find_certificate(g, cid, params)
    text = json.dumps(certificate_to_json(cert), sort_keys=True)
    back = certificate_from_json(text)
    assert back == cert
    assert json.loads(text)["kind"] == cert.kind and "claims_checked" in json.loads(text)


def test_malformed_certificate_json():
    with pytest.raises(DecodeError):
        certificate_from_json({"kind": "delta", "x": 1})
    with pytest.raises(DecodeError):
        certificate_from_json({"kind": "mystery"})


# -- schemes ------------------------------------------------------------------

def test_low_degree_on_a_forest_gives_degeneracy_labels():
    forest = BipartiteGraph.from_edges([1, 2], [3, 4, 5], [(1, 3), (1, 4), (2, 5)])
    cert = find_certificate(forest, "kpp-chordality", p=2)
    scheme = certificate_to_scheme(forest, cert)
    assert isinstance(scheme, LabelingScheme) and scheme.descriptor.d == 1
    assert scheme.verify(forest)


def test_delta_gives_a_succinct_plan():
    g = three_k2_plus_v()
    out = certificate_to_scheme(g, find_certificate(g, "P7-K12-2K2"))
    assert isinstance(out, SuccinctPlan) and out.to_json()["plan"] == "succinct"


def test_spp_peel_labels():
    g = spp_instance()
    cert = find_certificate(g, "P7-Spp", p=2)
    assert isinstance(cert, Peel) and verify_certificate(g, cert)
    scheme = certificate_to_scheme(g, cert)
    assert isinstance(scheme, LabelingScheme) and scheme.verify(g)


def test_invalid_certificate_is_refused():
    with pytest.raises(CertificateInvalidError):
        certificate_to_scheme(K44, LowDegree(1, 0))


# -- claim faithfulness over small exhaustive corpora -------------------------

SMALL = [("Qp", {"p": 1}), ("Mp", {"p": 1}), ("Np", {"p": 1}), ("A-graph", {}), ("L-plus-O01", {"s": 2, "p": 1}),
         ("P7-Spp", {"p": 2}), ("P7-KppO0p", {"p": 1}), ("P7-K12-2K2", {}), ("P7-P5K2", {}),
         ("P7-C4K2", {}), ("P7-domino", {}), ("P7-K33e", {}), ("chain", {}), ("2k2-c4-structure", {}),
         ("kpp-plus-k1", {"p": 1}), ("kpp-chordality", {"p": 2})]


def test_every_primary_class_has_a_finder_case():
    assert {cid for cid, _ in SMALL} == set(class_ids(primary_only=True))


@pytest.mark.parametrize("cid,params", SMALL, ids=[c for c, _ in SMALL])
def test_certificates_verify_on_small_corpus(cid, params):
    ref = ClassRef.make(cid, **params)
    kinds = set()
    for g in enumerate_class(ref.spec(), 3, up_to_swap=True):
        if cid == "chain" and g.n < 3:
            continue
        cert = find_certificate(g, cid, params)
        kinds.add(cert.kind)
        check = verify_certificate(g, cert)
        assert check, (g, check.reason)
        out = certificate_to_scheme(g, cert, verify=False)
        if isinstance(out, LabelingScheme):
            assert not out.mismatches(g), g
    assert kinds

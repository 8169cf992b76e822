"""End-to-end acceptance checks, one test per criterion.

Each test records PASS/FAIL through the ``criterion`` fixture, and the
terminal summary prints one line per criterion.  Corpus sizes are the ones
recorded in the decisions ledger; criterion 6 runs at six vertices per part and
dominates the runtime (several minutes on one core).
"""

from __future__ import annotations

import itertools
import json
import math
import random
from pathlib import Path

import pytest

from conftest import all_graphs
from herencode.cli import main as cli_main
from herencode.corpus import enumerate_class, random_graph
from herencode.errors import ClaimViolated, NotInClassError, SchemeUnavailableError
from herencode.formats import to_bipartite_edge_list, to_edge_list
from herencode.graph import BipartiteGraph, Graph, bits_to_list
from herencode.labeling import LabelingScheme, forest_cover_scheme, label_by_degeneracy
from herencode.modular import check_length_accounting, decode_modular, encode_modular
from herencode.patterns import instantiate
from herencode.recognition import contains_induced, free, in_class
from herencode.speed import (bipartite_ramsey, check_log_inequality, compositions, count_labelled,
                             ramsey_counterexample)
from herencode.succinct import decode_functional, encode_functional, functional_bound
from herencode.witness import (ClassRef, Delta, certificate_to_scheme, find_certificate,
                               verify_certificate)

pytestmark = pytest.mark.acceptance

RANDOM_GRAPHS = 10_000
WITNESS_PART = 6
CLAIM_PART = 5
PEEL_PART = 4


# -- corpus for criteria 1 and 2 ---------------------------------------------

def substituted_graph(rng: random.Random, n: int) -> Graph:
    """A graph with a deep modular decomposition: random blocks joined by a random quotient."""
    edges: list[tuple[int, int]] = []

    def build(verts: list[int]) -> None:
        if len(verts) <= 1:
            return
        k = rng.randint(2, min(len(verts), 6))
        rng.shuffle(verts)
        cuts = sorted(rng.sample(range(1, len(verts)), k - 1))
        blocks = [verts[i:j] for i, j in zip([0, *cuts], [*cuts, len(verts)])]
        style = rng.choice(("series", "parallel", "random"))
        for a, b in itertools.combinations(range(k), 2):
            if style == "series" or (style == "random" and rng.random() < 0.5):
                edges.extend((u, v) for u in blocks[a] for v in blocks[b])
        for block in blocks:
            build(block)

    build(list(range(1, n + 1)))
    return Graph.on(n, edges)


def modular_corpus():
    for n in range(6):
        yield from all_graphs(n)
    rng = random.Random(20240601)
    for i in range(RANDOM_GRAPHS):
        n = rng.randint(0, 64)
        if i % 2:
            yield substituted_graph(rng, n)
        else:
            yield random_graph(rng, n, rng.random())


def test_criterion_1_modular_round_trip(criterion):
    done = criterion(1, "modular codec round trip")
    failures, total = [], 0
    for g in modular_corpus():
        total += 1
        if decode_modular(encode_modular(g)) != g:
            failures.append(to_edge_list(g))
    done(not failures, f"{total} graphs, {len(failures)} failures")


def test_criterion_2_length_accounting(criterion):
    done = criterion(2, "modular length accounting")
    violations, total = 0, 0
    for g in modular_corpus():
        total += 1
        report = check_length_accounting(g)
        # recompute the bound from the reported parts rather than trusting ``ok``
        n = report.n
        bound = (report.c + 2) * n * math.log2(n) + n if n > 1 else float(n)
        parts = report.header + report.leaf_contribution + report.leaf_tags + report.internal_contribution
        if report.internal_contribution > bound + 1e-9 or parts != len(encode_modular(g)) or not report.ok:
            violations += 1
    done(violations == 0, f"{total} graphs, {violations} violations")


# -- criterion 3 --------------------------------------------------------------

def test_criterion_3_log_inequality(criterion):
    done = criterion(3, "log inequality over all compositions n <= 18")
    violations, total = 0, 0
    for n in range(2, 19):
        for parts in compositions(n):
            k = len(parts)
            if k == n:
                continue  # all parts 1: both sides are n log n, outside the 1 <= k < n domain
            total += 1
            exact = k ** k * math.prod(x ** x for x in parts) <= n ** n
            if not (exact and check_log_inequality(k, parts)):
                violations += 1
    done(violations == 0 and total == sum(2 ** (n - 1) - 1 for n in range(2, 19)),
         f"{total} compositions, {violations} violations")


# -- criterion 4 --------------------------------------------------------------

def test_criterion_4_functional_codec(criterion):
    done = criterion(4, "functional codec round trip and length bound")
    bad, encoded, skipped = [], 0, 0
    for n in range(6):
        for g in all_graphs(n):
            try:
                bits = encode_functional(g, 2)
            except NotInClassError:
                skipped += 1
                continue
            encoded += 1
            if decode_functional(bits, 2, n) != g or len(bits) > functional_bound(n, 2):
                bad.append(to_edge_list(g))
    for n in range(1, 13):
        for g in (Graph.on(n), Graph.on(n, itertools.combinations(range(1, n + 1), 2))):
            bits = encode_functional(g, 0)
            if decode_functional(bits, 0, n) != g or len(bits) > functional_bound(n, 0):
                bad.append(to_edge_list(g))
    done(not bad, f"{encoded} encoded at c=2, {skipped} without a witness chain, {len(bad)} failures")


# -- criterion 5 --------------------------------------------------------------

def _sound(scheme: LabelingScheme, g) -> bool:
    return not scheme.mismatches(g) and scheme.max_length <= scheme.descriptor.length_bound() + 1e-9


def test_criterion_5_labeling_soundness(criterion):
    done = criterion(5, "labeling soundness")
    failures = []
    schemes = 0
    for n in range(1, 7):
        for g in all_graphs(n):
            schemes += 1
            if not _sound(forest_cover_scheme(g), g):
                failures.append(("forest", to_edge_list(g)))
            for d in range(n):
                try:
                    scheme = label_by_degeneracy(g, d)
                except SchemeUnavailableError:
                    continue
                schemes += 1
                if not _sound(scheme, g):
                    failures.append(("degeneracy", d, to_edge_list(g)))
                break
    peels = 0
    for cid, params in (("P7-Spp", {"p": 2}), ("Qp", {"p": 1}), ("Qp", {"p": 2})):
        for g in enumerate_class(ClassRef.make(cid, **params).spec(), PEEL_PART, up_to_swap=True):
            cert = find_certificate(g, cid, params)
            scheme = certificate_to_scheme(g, cert, verify=False)
            if not isinstance(scheme, LabelingScheme):
                continue
            schemes += 1
            peels += cert.kind == "peel"
            if not _sound(scheme, g):
                failures.append((cid, to_bipartite_edge_list(g)))
    done(not failures and peels > 0, f"{schemes} schemes ({peels} from peelings), {len(failures)} failures")


# -- criterion 6 --------------------------------------------------------------

def _delta_size(g: BipartiteGraph, x: int, y: int) -> int:
    return len(set(g.graph.neighbours(x)) ^ set(g.graph.neighbours(y)))


WITNESS_CASES = [
    # class id, params, presence filter, constant
    ("P7-K12-2K2", {}, ("3K2", {}), 2),
    ("P7-P5K2", {}, ("3K2", {}), 4),
    ("P7-C4K2", {}, ("3K2", {}), 8),
    ("L-plus-O01", {"s": 2, "p": 2}, ("K2p+O01", {"p": 2}), 2),
    ("chain", {}, None, 1),
]


def test_criterion_6_witness_bounds(criterion):
    done = criterion(6, f"witness bounds, <= {WITNESS_PART} vertices per part")
    violations, checked = [], {}
    for cid, params, needed, constant in WITNESS_CASES:
        spec = ClassRef.make(cid, **params).spec()
        pattern = instantiate(needed[0], **needed[1]) if needed else None
        count = 0
        for g in enumerate_class(spec, WITNESS_PART, up_to_swap=True):
            if pattern is None and g.n < 3:
                continue
            if pattern is not None and contains_induced(g, pattern) is None:
                continue
            count += 1
            cert = find_certificate(g, cid, params)
            if not isinstance(cert, Delta):
                violations.append((cid, "no pair", to_bipartite_edge_list(g)))
                continue
            size = _delta_size(g, cert.x, cert.y)
            same = g.side(cert.x) == g.side(cert.y)
            if size > constant or size != cert.achieved or not same or not verify_certificate(g, cert):
                violations.append((cid, size, to_bipartite_edge_list(g)))
        checked[cid] = count
    done(not violations and all(checked.values()), f"instances {checked}, {len(violations)} violations")


# -- criterion 7 --------------------------------------------------------------

CLAIM_CASES = [
    ("Qp", {"p": 1}), ("Qp", {"p": 2}),
    ("Mp", {"p": 1}), ("Mp", {"p": 2}),
    ("Np", {"p": 1}), ("Np", {"p": 2}),
    ("A-graph", {}), ("P7-domino", {}), ("P7-K33e", {}),
]


def inject(rng: random.Random, g: BipartiteGraph, h: BipartiteGraph) -> BipartiteGraph:
    """Overwrite a random vertex set of ``g`` (growing it if needed) so it induces ``h``."""
    top, bottom = bits_to_list(g.top), bits_to_list(g.bottom)
    h_top, h_bottom = bits_to_list(h.top), bits_to_list(h.bottom)
    if rng.random() < 0.5:
        h_top, h_bottom = h_bottom, h_top
    fresh = itertools.count(max(g.graph.vertices, default=0) + 1)
    image = {}
    for pattern_side, host_side in ((h_top, top), (h_bottom, bottom)):
        reuse = rng.randint(0, min(len(pattern_side), len(host_side)))
        chosen = rng.sample(host_side, reuse) + [next(fresh) for _ in range(len(pattern_side) - reuse)]
        rng.shuffle(chosen)
        for pv, hv in zip(pattern_side, chosen):
            image[pv] = hv
        host_side.extend(v for v in chosen if v not in host_side)
    touched = set(image.values())
    edges = {e for e in g.graph.edges() if not (e[0] in touched and e[1] in touched)}
    edges |= {tuple(sorted((image[a], image[b]))) for a, b in h.graph.edges()}
    return BipartiteGraph.from_edges(top, bottom, sorted(edges))


def test_criterion_7_claim_suites(criterion):
    done = criterion(7, f"claim suites, <= {CLAIM_PART} vertices per part, and mutation detection")
    rng = random.Random(7)
    violated, failed, undetected, instances, mutants = [], [], [], 0, 0
    for cid, params in CLAIM_CASES:
        spec = ClassRef.make(cid, **params).spec()
        corpus = list(enumerate_class(spec, CLAIM_PART, up_to_swap=True))
        for g in corpus:
            instances += 1
            try:
                cert = find_certificate(g, cid, params)
            except ClaimViolated as exc:
                violated.append((cid, exc.claim, to_bipartite_edge_list(g)))
                continue
            if not verify_certificate(g, cert):
                failed.append((cid, to_bipartite_edge_list(g)))
        for _ in range(50):
            host = rng.choice(corpus)
            pattern = rng.choice(spec.forbidden)
            h = instantiate(pattern)
            h = h if isinstance(h, BipartiteGraph) else BipartiteGraph.from_graph(h)
            mutant = inject(rng, host, h)
            mutants += 1
            if in_class(mutant, spec):
                undetected.append((cid, str(pattern), to_bipartite_edge_list(mutant)))
    done(not (violated or failed or undetected),
         f"{instances} instances, {len(violated)} claim violations, {len(failed)} rejected certificates, "
         f"{mutants} mutants, {len(undetected)} undetected")


# -- criterion 8 --------------------------------------------------------------

def test_criterion_8_speed_anchors(criterion):
    done = criterion(8, "speed anchors")
    everything = [count_labelled(free(), n) for n in range(1, 7)]
    bell = [count_labelled(free(instantiate("P", k=3)), n) for n in range(1, 7)]
    ok = everything == [2 ** math.comb(n, 2) for n in range(1, 7)]
    ok &= bell == [1, 2, 5, 15, 52, 203]
    ok &= bipartite_ramsey(1, 1) == 1
    witness = ramsey_counterexample(1, 2, 2)
    ok &= witness is not None and (bipartite_ramsey(1, 2) or 0) >= 3
    done(ok, f"Free(empty) {everything}, Free(P3) {bell}")


# -- criterion 9 --------------------------------------------------------------

def test_criterion_9_cli_determinism(criterion, tmp_path, monkeypatch, capsysbinary):
    done = criterion(9, "CLI reruns from a manifest are byte-identical")
    monkeypatch.chdir(tmp_path)
    c5 = Graph.on(5, [(1, 2), (2, 3), (3, 4), (4, 5), (1, 5), (1, 3)])
    Path("g.txt").write_text(to_edge_list(c5))
    spp = BipartiteGraph.from_edges([1, 2, 3, 4], [5, 6, 7, 8],
                                    [(1, 5), (1, 6), (2, 5), (2, 6), (1, 7), (3, 5), (4, 8)])
    Path("b.txt").write_text(to_bipartite_edge_list(spp))
    Path("spec.json").write_text(json.dumps({"name": "p3-free", "forbidden": [{"pattern": "P", "k": 3}]}))

    def run(argv):
        code = cli_main([str(a) for a in argv])
        out, _ = capsysbinary.readouterr()
        return code, out

    runs = [
        ("encode", ["encode", "g.txt", "--verify", "--out", "w1"]),
        ("encode-functional", ["encode", "g.txt", "--codec", "functional", "--c", "2", "--out", "f1"]),
        ("decode", ["decode", "w1", "--out", "d1"]),
        ("label", ["label", "g.txt", "--d", "2", "--out", "l1"]),
        ("label-certificate", ["label", "b.txt", "--scheme", "certificate", "--class", "P7-Spp", "--p", 2,
                               "--out", "lc1"]),
        ("query", ["query", "l1", 1, 3]),
        ("witness", ["witness", "b.txt", "--class", "P7-Spp", "--p", 2, "--out", "c1"]),
        ("witness-check", ["witness", "b.txt", "--check", "c1"]),
        ("count", ["count", "spec.json", "--n-max", 5, "--out", "t1"]),
        ("corpus", ["corpus", "--class", "chain", "--max-part", 3, "--out", "k1"]),
        ("corpus-sample", ["corpus", "--class", "P7-C4K2", "--sample", 8, "--max-part", 4, "--seed", 3,
                           "--out", "s1"]),
    ]
    differing = []
    for name, argv in runs:
        code, out = run(argv + ["--manifest", f"{name}.manifest"])
        assert code == 0, name
        outputs = json.loads(Path(f"{name}.manifest").read_text())["outputs"]
        first = [Path(p).read_bytes() for p in outputs] or [out]
        again_code, again_out = run(["replay", f"{name}.manifest", "--out", f"{name}.again"])
        if outputs:
            second = [Path(f"{name}.again").read_bytes()]
            if outputs[1:]:
                # sidecar files are recorded too; compare the primary output and rerun for the sidecar
                second.append(Path(f"{name}.again.stats.json").read_bytes())
        else:
            second = [again_out]
        if again_code != 0 or first != second:
            differing.append(name)
    done(not differing, f"{len(runs)} commands, differing: {differing or 'none'}")

"""Command-line behaviour: outputs, exit codes, manifests and replay."""

from __future__ import annotations

import json
from pathlib import Path

from herencode.formats import from_edge_list, to_bipartite_edge_list, to_edge_list
from herencode.graph import BipartiteGraph, Graph
from herencode.succinct import decode_functional, from_hex

C4 = Graph.on(4, [(1, 2), (2, 3), (3, 4), (1, 4)])
P4 = Graph.on(4, [(1, 2), (2, 3), (3, 4)])


def write(name: str, text: str | bytes) -> str:
    p = Path(name)
    p.write_bytes(text.encode() if isinstance(text, str) else text)
    return name


def bip(top, bottom, edges) -> str:
    return to_bipartite_edge_list(BipartiteGraph.from_edges(top, bottom, edges))


# -- encode / decode ----------------------------------------------------------

def test_encode_decode_modular_round_trip(run_cli):
    write("c4.txt", to_edge_list(C4))
    code, out, err = run_cli("encode", "c4.txt", "--verify")
    assert code == 0
    stats = json.loads(err)
    assert stats["ok"] and stats["codec"] == "modular"
    write("c4.word", out)
    code, out, _ = run_cli("decode", "c4.word")
    assert code == 0 and from_edge_list(out.decode()) == C4


def test_encode_functional_round_trip(run_cli):
    write("p4.txt", to_edge_list(P4))
    code, out, err = run_cli("encode", "p4.txt", "--codec", "functional", "--c", "1", "--verify")
    assert code == 0 and json.loads(err)["ok"]
    bits, n, c = from_hex(out.decode().strip())
    assert (n, c) == (4, 1) and decode_functional(bits, c, n) == P4
    write("p4.hex", out)
    code, out, _ = run_cli("decode", "p4.hex", "--codec", "functional")
    assert code == 0 and from_edge_list(out.decode()) == P4


def test_encode_writes_stats_sidecar(run_cli):
    write("c4.txt", to_edge_list(C4))
    code, out, _ = run_cli("encode", "c4.txt", "--out", "c4.word")
    assert code == 0 and out == b""
    assert json.loads(Path("c4.word.stats.json").read_text())["ok"]


def test_unknown_codec_is_a_usage_error(run_cli):
    write("c4.txt", to_edge_list(C4))
    try:
        code = run_cli("encode", "c4.txt", "--codec", "zip")[0]
    except SystemExit as exc:
        code = exc.code
    assert code == 2


def test_functional_outside_class_exits_five(run_cli):
    c5 = Graph.on(5, [(1, 2), (2, 3), (3, 4), (4, 5), (1, 5)])
    write("c5.txt", to_edge_list(c5))
    code, _, err = run_cli("encode", "c5.txt", "--codec", "functional", "--c", "0")
    assert code == 5 and "not in class" in err


def test_malformed_input_reports_offset(run_cli):
    write("bad.txt", "3\n1 x\n")
    code, _, err = run_cli("encode", "bad.txt", "--format", "edge-list")
    assert code == 2 and "error" in err


# -- label / query ------------------------------------------------------------

def test_label_forest_and_query(run_cli):
    star = Graph.on(5, [(1, 2), (1, 3), (1, 4), (1, 5)])
    write("star.txt", to_edge_list(star))
    code, out, _ = run_cli("label", "star.txt", "--d", "1", "--verify", "--out", "star.json")
    assert code == 0
    bundle = json.loads(Path("star.json").read_text())
    assert bundle["n"] == 5
    assert run_cli("query", "star.json", 1, 2)[:2] == (0, b"1\n")
    assert run_cli("query", "star.json", 2, 3)[:2] == (0, b"0\n")


def test_query_complete_and_empty(run_cli):
    k4 = Graph.on(4, [(a, b) for a in range(1, 5) for b in range(a + 1, 5)])
    write("k4.txt", to_edge_list(k4))
    write("o4.txt", to_edge_list(Graph.on(4)))
    run_cli("label", "k4.txt", "--d", "0", "--out", "k4.json")
    run_cli("label", "o4.txt", "--d", "0", "--out", "o4.json")
    assert run_cli("query", "k4.json", 1, 2)[1] == b"1\n"
    assert run_cli("query", "o4.json", 1, 2)[1] == b"0\n"


def test_query_unknown_vertex_and_bad_bundle(run_cli):
    write("p4.txt", to_edge_list(P4))
    run_cli("label", "p4.txt", "--out", "p4.json")
    code, _, err = run_cli("query", "p4.json", 1, 9)
    assert code == 2 and "9" in err
    write("junk.json", "{not json")
    assert run_cli("query", "junk.json", 1, 2)[0] == 2


def test_label_unavailable_scheme_exits_three(run_cli):
    c5 = Graph.on(5, [(1, 2), (2, 3), (3, 4), (4, 5), (1, 5)])
    write("c5.txt", to_edge_list(c5))
    code, _, err = run_cli("label", "c5.txt", "--d", "1")
    assert code == 3 and "scheme unavailable" in err
    assert run_cli("label", "c5.txt", "--scheme", "biclique")[0] == 5
    write("p4.txt", to_edge_list(P4))
    code, _, err = run_cli("label", "p4.txt", "--scheme", "biclique")
    assert code == 3 and "missing" in err


def test_label_forest_cover_and_certificate(run_cli):
    write("c4.txt", to_edge_list(C4))
    assert run_cli("label", "c4.txt", "--scheme", "forest-cover", "--verify")[0] == 0
    write("spp.txt", bip([1, 2, 3, 4], [5, 6, 7, 8],
                         [(1, 5), (1, 6), (2, 5), (2, 6), (1, 7), (3, 5), (4, 8)]))
    code, out, _ = run_cli("label", "spp.txt", "--scheme", "certificate", "--class", "P7-Spp",
                           "--p", "2", "--verify", "--out", "spp.json")
    assert code == 0
    for u, v, want in [(1, 5, b"1\n"), (1, 8, b"0\n"), (4, 8, b"1\n"), (3, 6, b"0\n")]:
        assert run_cli("query", "spp.json", u, v)[1] == want


# -- witness ------------------------------------------------------------------

def test_witness_delta_and_check(run_cli):
    write("g.txt", bip([1, 2, 3], [4, 5, 6, 7], [(1, 4), (2, 5), (3, 6), (1, 7), (2, 7)]))
    code, out, _ = run_cli("witness", "g.txt", "--class", "P7-K12-2K2", "--out", "cert.json")
    assert code == 0
    cert = json.loads(Path("cert.json").read_text())
    assert cert["kind"] == "delta"
    code, out, _ = run_cli("witness", "g.txt", "--check", "cert.json")
    assert code == 0 and b"verified" in out

    cert["bound"] = 1
    write("tampered.json", json.dumps(cert))
    code, _, err = run_cli("witness", "g.txt", "--check", "tampered.json")
    assert code == 4 and "rejected" in err


def test_witness_not_in_class_exits_five(run_cli):
    k44 = [(u, v) for u in range(1, 5) for v in range(5, 9)]
    write("q.txt", bip([1, 2, 3, 4, 9], [5, 6, 7, 8], k44 + [(9, 5)]))
    code, _, err = run_cli("witness", "q.txt", "--class", "Qp", "--p", "2")
    assert code == 5 and "not in class" in err


# -- count / corpus -----------------------------------------------------------

def test_count_tables(run_cli):
    write("all.json", json.dumps({"name": "all", "forbidden": []}))
    code, out, _ = run_cli("count", "all.json", "--n-max", 4)
    assert code == 0
    rows = out.decode().strip().splitlines()
    counts = [int(r.split(",")[2]) for r in rows[1:]]
    assert counts == [1, 2, 8, 64]

    write("p3.json", json.dumps({"name": "p3-free", "forbidden": [{"pattern": "P", "k": 3}]}))
    code, out, _ = run_cli("count", "p3.json", "--n-max", 5)
    counts = [int(r.split(",")[2]) for r in out.decode().strip().splitlines()[1:]]
    assert code == 0 and counts == [1, 2, 5, 15, 52]


def test_count_limit_is_a_usage_error(run_cli):
    write("all.json", json.dumps({"name": "all", "forbidden": []}))
    code, _, err = run_cli("count", "all.json", "--n-max", 9)
    assert code == 2


def test_corpus_json_lines(run_cli):
    code, out, _ = run_cli("corpus", "--class", "chain", "--max-part", 2)
    assert code == 0
    lines = out.decode().splitlines()
    assert lines and all(set(json.loads(x)) == {"top", "bottom", "edges"} for x in lines)
    code2, out2, _ = run_cli("corpus", "--class", "chain", "--max-part", 2, "--jobs", 2)
    assert out2 == out


# -- determinism, manifests, replay ------------------------------------------

def test_outputs_are_byte_identical_across_runs(run_cli):
    write("c4.txt", to_edge_list(C4))
    first = run_cli("encode", "c4.txt")
    second = run_cli("encode", "c4.txt")
    assert first == second


def test_manifest_replay_reproduces_output(run_cli):
    write("c4.txt", to_edge_list(C4))
    code, _, _ = run_cli("label", "c4.txt", "--d", "2", "--out", "a.json", "--manifest", "m.json")
    assert code == 0
    manifest = json.loads(Path("m.json").read_text())
    assert manifest["command"] == "label" and manifest["outputs"] == ["a.json"]
    assert manifest["parameters"]["d"] == 2
    assert run_cli("replay", "m.json", "--out", "b.json")[0] == 0
    assert Path("a.json").read_bytes() == Path("b.json").read_bytes()


def test_replay_count_and_corpus(run_cli):
    write("all.json", json.dumps({"name": "all", "forbidden": []}))
    run_cli("count", "all.json", "--n-max", 3, "--out", "t1.csv", "--manifest", "m1.json")
    run_cli("replay", "m1.json", "--out", "t2.csv")
    assert Path("t1.csv").read_bytes() == Path("t2.csv").read_bytes()
    run_cli("corpus", "--class", "P7-C4K2", "--sample", 5, "--max-part", 3, "--seed", 7,
            "--out", "c1.jsonl", "--manifest", "m2.json")
    assert json.loads(Path("m2.json").read_text())["seed"] == 7
    run_cli("replay", "m2.json", "--out", "c2.jsonl")
    assert Path("c1.jsonl").read_bytes() == Path("c2.jsonl").read_bytes()


def test_replay_malformed_manifest(run_cli):
    write("m.json", "[]")
    assert run_cli("replay", "m.json")[0] == 2

"""Shared helpers: exhaustive graph generators, hypothesis strategies, networkx bridges."""

from __future__ import annotations

import itertools

import networkx as nx
import pytest
from hypothesis import strategies as st

from herencode.graph import BipartiteGraph, Graph


def all_graphs(n: int):
    """Every labelled graph on {1..n}."""
    pairs = list(itertools.combinations(range(1, n + 1), 2))
    for bits in range(1 << len(pairs)):
        yield Graph.on(n, [e for i, e in enumerate(pairs) if bits >> i & 1])


def to_nx(g) -> nx.Graph:
    g = g.graph if isinstance(g, BipartiteGraph) else g
    out = nx.Graph()
    out.add_nodes_from(g.vertices)
    out.add_edges_from(g.edges())
    return out


def from_nx(h: nx.Graph) -> Graph:
    return Graph(h.nodes, h.edges)


@st.composite
def graphs(draw, max_n: int = 8, min_n: int = 0):
    n = draw(st.integers(min_n, max_n))
    pairs = list(itertools.combinations(range(1, n + 1), 2))
    chosen = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return Graph.on(n, [e for e, keep in zip(pairs, chosen) if keep])


@st.composite
def bipartite_graphs(draw, max_part: int = 5, min_part: int = 0):
    a = draw(st.integers(min_part, max_part))
    b = draw(st.integers(min_part, max_part))
    top = list(range(1, a + 1))
    bottom = list(range(a + 1, a + b + 1))
    cross = [(u, v) for u in top for v in bottom]
    chosen = draw(st.lists(st.booleans(), min_size=len(cross), max_size=len(cross)))
    return BipartiteGraph.from_edges(top, bottom, [e for e, keep in zip(cross, chosen) if keep])


@pytest.fixture
def run_cli(tmp_path, monkeypatch, capsysbinary):
    """Run the command-line entry point in-process; returns (exit code, stdout bytes, stderr text)."""
    from herencode.cli import main

    monkeypatch.chdir(tmp_path)

    def run(*argv):
        code = main([str(a) for a in argv])
        out, err = capsysbinary.readouterr()
        return code, out, err.decode()

    return run


ACCEPTANCE_KEY = pytest.StashKey[dict]()


@pytest.fixture
def criterion(request):
    """Record one acceptance criterion's outcome for the terminal summary."""
    results = request.config.stash.setdefault(ACCEPTANCE_KEY, {})

    def record(number: int, title: str):
        results[number] = (title, None)

        def done(ok: bool, detail: str = ""):
            results[number] = (title, (ok, detail))
            assert ok, f"criterion {number} ({title}) failed: {detail}"

        return done

    yield record
    for number, (title, outcome) in list(results.items()):
        if outcome is None:
            results[number] = (title, (False, "did not finish"))


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    results = config.stash.get(ACCEPTANCE_KEY, {})
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(results):
        title, (ok, detail) = results[number]
        line = f"criterion {number}: {'PASS' if ok else 'FAIL'}  {title}"
        terminalreporter.write_line(line + (f"  [{detail}]" if detail else ""))

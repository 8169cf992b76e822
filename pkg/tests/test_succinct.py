import itertools

import pytest
from hypothesis import given, settings, strategies as st

from herencode.errors import ArgumentError, MalformedWordError, NotInClassError
from herencode.graph import Graph
from herencode.patterns import instantiate
from herencode.succinct import (DeltaPair, FunctionalWitness, decode_functional, encode_functional,
                                find_delta_pair, find_functional_witness, from_hex, functional_bound,
                                to_hex)

from conftest import all_graphs, graphs

P4 = Graph.on(4, [(1, 2), (2, 3), (3, 4)])
C5 = instantiate("C", k=5)


def witness_exists_oracle(g: Graph, c: int) -> bool:
    """Try every (y, U, R) and every truth table directly."""
    verts = g.vertices
    for y in verts:
        others = [v for v in verts if v != y]
        for kr in range(c + 1):
            for R in itertools.combinations(others, kr):
                pool = [v for v in others if v not in R]
                for ku in range(c + 1):
                    for U in itertools.combinations(pool, ku):
                        zs = [z for z in pool if z not in U]
                        for table in itertools.product((0, 1), repeat=1 << ku):
                            if all(table[sum(g.adj(x, z) << i for i, x in enumerate(U))] == g.adj(y, z)
                                   for z in zs):
                                return True
    return False


# -- witnesses ----------------------------------------------------------------

def test_isolated_vertex_witness():
    g = Graph.on(3, [(1, 2)])
    assert find_functional_witness(g, 0) == FunctionalWitness(3, (), (), (0,))


def test_c5_witness_deletes_both_neighbours():
    wit = find_functional_witness(C5, 2)
    assert wit.U == () and set(wit.R) == set(C5.neighbours(wit.y)) and wit.table == (0,)
    assert wit.is_valid(C5, 2)


def test_twin_witness():
    g = Graph.on(4, [(1, 3), (1, 4), (2, 3), (2, 4), (3, 4)])  # 1 and 2 are twins, no isolated vertex
    wit = find_functional_witness(g, 1)
    assert wit.is_valid(g, 1)
    assert find_functional_witness(g, 0) is None or find_functional_witness(g, 0).is_valid(g, 0)
    twin = FunctionalWitness(2, (1,), (), (0, 1))
    assert twin.is_valid(g)


def test_witness_search_matches_oracle():
    for n in range(1, 6):
        for g in all_graphs(n):
            for c in (0, 1):
                wit = find_functional_witness(g, c)
                assert (wit is not None) == witness_exists_oracle(g, c)
                if wit is not None:
                    assert wit.is_valid(g, c)


def test_witness_rejects_large_c():
    with pytest.raises(ArgumentError):
        find_functional_witness(P4, 4)
    with pytest.raises(ArgumentError):
        find_functional_witness(P4, -1)


# -- delta pairs --------------------------------------------------------------

def test_delta_pair_examples():
    k22 = instantiate("K_bip", n=2, m=2)
    pair = find_delta_pair(k22, 0)
    assert (pair.x, pair.y, pair.delta) == (1, 2, ())
    assert find_delta_pair(P4, 1) == DeltaPair(1, 3, (4,))
    assert find_delta_pair(C5, 1) is None


@settings(max_examples=150, deadline=None)
@given(graphs(max_n=8, min_n=2), st.integers(0, 2))
def test_delta_pair_is_least_and_implies_witness(g, c):
    pair = find_delta_pair(g, c)
    expected = next(((x, y) for x, y in itertools.combinations(g.vertices, 2)
                     if len(set(g.neighbours(x)) ^ set(g.neighbours(y))) <= c), None)
    assert (pair and (pair.x, pair.y)) == (expected or None)
    if pair is not None:
        assert pair.to_witness().is_valid(g)
        # the converted witness has one vertex in U, so it needs c >= 1
        assert find_functional_witness(g, max(c, 1)) is not None


def test_twins_do_not_give_a_witness_at_c0():
    c4 = instantiate("C", k=4).graph
    assert find_delta_pair(c4, 0) is not None
    assert find_functional_witness(c4, 0) is None


def test_same_part_delta_pairs():
    p5 = instantiate("P", k=5)
    pair = find_delta_pair(p5, 1, same_part=True)
    assert p5.side(pair.x) == p5.side(pair.y)
    with pytest.raises(ArgumentError):
        find_delta_pair(P4, 1, same_part=True)


# -- codec --------------------------------------------------------------------

def test_round_trip_exhaustive_c2():
    for n in range(0, 6):
        words = {}
        for g in all_graphs(n):
            bits = encode_functional(g, 2)
            assert len(bits) <= functional_bound(n, 2)
            assert decode_functional(bits, 2, n) == g
            words[bits] = g
        assert len(words) == 2 ** (n * (n - 1) // 2)


@pytest.mark.parametrize("c", [0, 1])
def test_round_trip_where_encodable(c):
    for n in range(0, 6):
        for g in all_graphs(n):
            try:
                bits = encode_functional(g, c)
            except NotInClassError as exc:
                assert exc.residual.n > 2
                continue
            assert len(bits) <= functional_bound(n, c)
            assert decode_functional(bits, c, n) == g


def test_empty_graph_with_c0():
    o4 = Graph.on(4)
    bits = encode_functional(o4, 0)
    # two peel records of a 2-bit label and a 1-bit table, then the base edge bit
    assert bits == "00" + "0" + "01" + "0" + "0"
    assert decode_functional(bits, 0, 4) == o4


@pytest.mark.parametrize("g,c", [(instantiate("K_bip", n=3, m=3).graph, 1), (P4, 1),
                                 (instantiate("K", k=6), 0), (Graph.on(6), 0)])
def test_round_trip_examples(g, c):
    bits = encode_functional(g, c)
    assert decode_functional(bits, c, g.n) == g


def test_decode_rejects_truncation_and_garbage():
    bits = encode_functional(P4, 1)
    with pytest.raises(MalformedWordError):
        decode_functional(bits[:-1], 1, 4)
    with pytest.raises(MalformedWordError):
        decode_functional(bits[:-1] + "2", 1, 4)


def test_not_in_class_carries_residual():
    with pytest.raises(NotInClassError) as info:
        encode_functional(C5, 0)
    assert info.value.residual == C5


def test_hex_round_trip():
    bits = encode_functional(P4, 1)
    text = to_hex(bits, 4, 1)
    assert len(bytes.fromhex(text)) >= 16
    assert from_hex(text) == (bits, 4, 1)
    with pytest.raises(MalformedWordError):
        from_hex("00" * 16)
    with pytest.raises(MalformedWordError):
        from_hex(text[:-2])

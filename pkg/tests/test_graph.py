import itertools

import networkx as nx
import pytest
from hypothesis import given, settings, strategies as st

from chromafun.errors import DomainError, ParseError, StructuralError
from chromafun.graph import (
    INFINITE,
    FiniteGraph,
    GraphHom,
    Injection,
    adjacency_distance,
    all_injections,
    complete_graph,
    cycle_graph,
    edgeless_graph,
    has_odd_cycle,
    identity_hom,
    is_surjective_hom,
    iter_homs,
    path_graph,
    validate_hom,
)
from chromafun.graph6 import emit_graph6, parse_graph6

from oracles import atlas, from_nx, to_nx


@st.composite
def graphs(draw, max_vertices=8):
    n = draw(st.integers(0, max_vertices))
    pairs = list(itertools.combinations(range(n), 2))
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True) if pairs else st.just([]))
    return FiniteGraph(n, frozenset(chosen))


def test_parse_small():
    assert parse_graph6("A_") == complete_graph(2)
    assert parse_graph6("@") == edgeless_graph(1)
    assert parse_graph6("Bw") == complete_graph(3)
    assert parse_graph6(">>graph6<<Bw\n") == complete_graph(3)


def test_graph6_matches_reference_codec():
    for g in atlas(7):
        G = to_nx(g)
        ref = nx.to_graph6_bytes(G, header=False).decode().strip()
        assert emit_graph6(g) == ref
        back = nx.from_graph6_bytes(ref.encode())
        assert sorted(map(sorted, back.edges())) == sorted(map(list, g.edges))


@settings(max_examples=200, deadline=None)
@given(graphs(8))
def test_roundtrip(g):
    assert parse_graph6(emit_graph6(g)) == g


def test_roundtrip_large_size_field():
    g = path_graph(70)
    text = emit_graph6(g)
    assert text[0] == "~"
    assert parse_graph6(text) == g
    assert text == nx.to_graph6_bytes(nx.path_graph(70), header=False).decode().strip()


@pytest.mark.parametrize(
    "text, offset",
    [
        ("B\x10", 1),  # byte below the printable range
        ("Bww", 2),  # too long
        ("C", 1),  # truncated
        ("Bx", 1),  # padding bit set
        ("~?", 2),  # truncated long size
    ],
)
def test_parse_errors_carry_offsets(text, offset):
    with pytest.raises(ParseError) as err:
        parse_graph6(text)
    assert err.value.offset == offset


def test_graph_invariants():
    g = FiniteGraph(3, frozenset({(1, 0), (0, 1)}))
    assert g.edges == frozenset({(0, 1)})
    with pytest.raises(StructuralError):
        FiniteGraph(3, frozenset({(1, 1)}))
    with pytest.raises(StructuralError):
        FiniteGraph(2, frozenset({(0, 2)}))
    assert complete_graph(0).vertex_count == 0
    assert complete_graph(3).edge_count == 3
    assert complete_graph(5).edge_count == 10


def test_contraction_merges_parallel_edges():
    g = cycle_graph(3).contract_edge(0, 1)
    assert g == complete_graph(2)
    assert cycle_graph(4).delete_edge(0, 1) == FiniteGraph.from_edges(4, [(1, 2), (2, 3), (0, 3)])


def test_validate_hom():
    k2, k3 = complete_graph(2), complete_graph(3)
    assert validate_hom(identity_hom(k3))
    assert not validate_hom(GraphHom(k2, k2, (0, 0)))
    with pytest.raises(StructuralError):
        validate_hom(GraphHom(k2, k2, (0, 5)))
    with pytest.raises(StructuralError):
        validate_hom(GraphHom(k2, k2, (0,)))
    # maps P_3 -> K_2 that are homs are exactly the proper 2-colorings
    p3 = path_graph(3)
    homs = [m for m in itertools.product(range(2), repeat=3) if validate_hom(GraphHom(p3, k2, m))]
    assert sorted(homs) == [(0, 1, 0), (1, 0, 1)]


def test_surjectivity():
    k2, k3 = complete_graph(2), complete_graph(3)
    assert is_surjective_hom(identity_hom(k3))
    assert not is_surjective_hom(GraphHom(k2, k3, (0, 1)))
    assert is_surjective_hom(GraphHom(path_graph(3), k2, (0, 1, 0)))


def test_homs_compose():
    graphs4 = atlas(4)
    for a, b, c in itertools.product(graphs4[5:], repeat=3):
        for h1 in itertools.islice(iter_homs(a, b), 3):
            for h2 in itertools.islice(iter_homs(b, c), 3):
                assert validate_hom(h1.compose(h2))


def test_injection():
    with pytest.raises(DomainError):
        Injection(2, 3, (1, 1))
    with pytest.raises(StructuralError):
        Injection(2, 3, (0, 3))
    assert len(list(all_injections(2, 4))) == 12
    f = Injection(2, 3, (2, 0))
    g = Injection(3, 4, (1, 3, 0))
    assert f.compose(g).map == (0, 1)


def test_distances():
    p4 = path_graph(4)
    assert adjacency_distance(p4, 2, 2) == 0
    assert adjacency_distance(p4, 0, 3) == 3
    assert adjacency_distance(edgeless_graph(2), 0, 1) is INFINITE


def test_triangle_inequality():
    for g in atlas(6):
        if g.vertex_count == 0 or not g.is_connected():
            continue
        d = [[adjacency_distance(g, u, v) for v in range(g.vertex_count)] for u in range(g.vertex_count)]
        for u, v, w in itertools.product(range(g.vertex_count), repeat=3):
            assert d[u][w] <= d[u][v] + d[v][w]


def test_odd_cycles_against_brute_force():
    assert has_odd_cycle(complete_graph(3))
    assert not has_odd_cycle(cycle_graph(4))
    assert has_odd_cycle(cycle_graph(5))
    for g in atlas(6):
        two_colorable = any(
            all(c[u] != c[v] for u, v in g.edges) for c in itertools.product(range(2), repeat=g.vertex_count)
        )
        assert has_odd_cycle(g) == (not two_colorable)


def test_trees_have_no_odd_cycle():
    for n in range(2, 9):
        for T in nx.nonisomorphic_trees(n):
            assert not has_odd_cycle(from_nx(T))

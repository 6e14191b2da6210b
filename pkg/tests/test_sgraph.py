import itertools

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from criticalis.sgraph import (
    GraphFormatError,
    NotCograph,
    TwinVector,
    Vertex,
    blowup,
    build_family,
    builtin,
    complete,
    complete_bipartite,
    cotree,
    decode_graph6,
    disjoint_union,
    duplicate_replicate,
    encode_graph6,
    format_edgelist,
    from_edges,
    is_cograph,
    is_twin_free,
    join,
    parse_edgelist,
    path,
    threshold,
    trivial,
    twin_pairs,
    vertex_class,
)


def labelled_graphs(n):
    pairs = list(itertools.combinations(range(n), 2))
    for mask in range(1 << len(pairs)):
        yield [p for k, p in enumerate(pairs) if mask >> k & 1]


@pytest.mark.parametrize("n", range(0, 6))
def test_graph6_agrees_with_networkx_exhaustively(n):
    for edges in labelled_graphs(n):
        ng = nx.Graph()
        ng.add_nodes_from(range(n))
        ng.add_edges_from(edges)
        ref = nx.to_graph6_bytes(ng, header=False).decode().strip()
        ours = from_edges(n, [(str(i + 1), str(j + 1)) for i, j in edges])
        assert encode_graph6(ours) == ref
        assert decode_graph6(ref) == ours


def test_graph6_large_size_field():
    g = path(70)
    s = encode_graph6(g)
    assert s[0] == "~"
    assert decode_graph6(s) == g
    assert decode_graph6(">>graph6<<" + encode_graph6(path(3))) == path(3)


@pytest.mark.parametrize("bad", ["", "B ", "Bw?", "C", "~?", "Bx"])
def test_graph6_rejects_malformed(bad):
    with pytest.raises(GraphFormatError):
        decode_graph6(bad)


def test_edgelist_round_trip_with_signed_arcs():
    text = "n 3\nedge 1 2\narc 2 3 -1\narc 3 2 2  # comment\n"
    g = parse_edgelist(text)
    assert g.weight("2", "3") == -1 and g.weight("3", "2") == 2
    assert not g.is_simple()
    assert parse_edgelist(format_edgelist(g)) == g


def test_edgelist_weights_accumulate():
    g = parse_edgelist("n 2\nedge 1 2\narc 1 2 -1\n")
    assert g.weight("1", "2") == 0 and g.weight("2", "1") == 1


@pytest.mark.parametrize(
    "bad",
    ["edge 1 2", "n 2\nedge 1 3", "n 2\nedge 1 1", "n 2\narc 1 2 0", "n 2\nn 2", "n 2\nfoo 1 2", "n x"],
)
def test_edgelist_errors(bad):
    with pytest.raises(GraphFormatError):
        parse_edgelist(bad)


def test_duplicate_and_replicate():
    p3 = path(3)
    d = duplicate_replicate(p3, "1", 2)
    assert d.n == 5 and d.neighbors(Vertex("1", 2)) == [Vertex("2")]
    r = duplicate_replicate(p3, "2", 1, "replicate")
    assert r.weight(Vertex("2"), Vertex("2", 1)) == 1
    assert set(r.neighbors(Vertex("2", 1))) == {Vertex("1"), Vertex("2"), Vertex("3")}
    with pytest.raises(ValueError):
        duplicate_replicate(p3, "1", 0)


def test_blowup_of_k2_is_complete_bipartite():
    g = complete_bipartite(2, 3)
    assert g.n == 5 and len(g.edges()) == 6
    assert nx.is_isomorphic(nx.Graph([(str(u), str(v)) for u, v in g.edges()]), nx.complete_bipartite_graph(2, 3))
    k3 = blowup(path(1), TwinVector(path(1), {"1": -2}))
    assert k3.same_graph(complete(3).relabel({"2": Vertex("1", 1), "3": Vertex("1", 2)}).relabel({"1": Vertex("1")}))
    assert vertex_class(k3, "1") == [Vertex("1"), Vertex("1", 1), Vertex("1", 2)]


@settings(max_examples=30, deadline=None)
@given(st.lists(st.integers(-2, 2), min_size=4, max_size=4))
def test_blowups_create_the_expected_twins(seq):
    g = path(4)
    d = TwinVector.from_sequence(g, seq)
    b = blowup(g, d)
    assert b.n == 4 + sum(abs(c) for c in seq)
    kinds = {(u.name, v.name): k for u, v, k in twin_pairs(b) if u.name == v.name}
    for v, c in zip(g.vertices, seq):
        if c:
            want = "duplicated" if c > 0 else "replicated"
            assert kinds[(v.name, v.name)] == want


def test_twin_detection():
    assert is_twin_free(builtin("fig5"))
    assert not is_twin_free(path(3))
    assert twin_pairs(path(3)) == [(Vertex("1"), Vertex("3"), "duplicated")]
    assert twin_pairs(complete(2)) == [(Vertex("1"), Vertex("2"), "replicated")]
    assert is_twin_free(path(4))


def test_twin_vector_parsing():
    g = path(3)
    d = TwinVector.parse(g, "v1:-1, v3:2")
    assert d.values() == (-1, 0, 2)
    assert d.support().values() == (-1, 0, 1)
    assert str(d) == "v1:-1,v3:2"
    for bad in ("v1", "v9:1", "v1:x"):
        with pytest.raises(GraphFormatError):
            TwinVector.parse(g, bad)
    with pytest.raises(ValueError):
        TwinVector.from_sequence(g, [1, 2])


def test_builtin_matrices():
    fig2 = builtin("fig2")
    assert fig2.weight("1", "5") == -1 and fig2.weight("1", "2") == 1
    assert fig2.weight("2", "1") == -1
    assert not fig2.is_simple()
    assert builtin("hypercube3").n == 8 and len(builtin("hypercube3").edges()) == 12
    with pytest.raises(KeyError):
        builtin("nope")


def test_families():
    assert build_family("cycle 5").n == 5
    assert build_family("complete_bipartite 2,2").n == 4
    for bad in ("", "cycle", "cycle x", "star 3", "path 0", "hypercube 4"):
        with pytest.raises(ValueError):
            build_family(bad)


def test_threshold_graphs():
    th4 = threshold(4)
    assert th4.neighbors("4") == [Vertex("1"), Vertex("2"), Vertex("3")]
    assert threshold(5).neighbors("5") == []


def test_cotree_of_fig8_rebuilds_the_graph():
    g = builtin("fig8")
    t = cotree(g)
    assert t.kind == "join"
    assert t.rebuild().same_graph(g)
    assert sorted(map(str, t.leaves())) == sorted(map(str, g.vertices))


def test_p4_is_not_a_cograph():
    with pytest.raises(NotCograph):
        cotree(path(4))
    assert is_cograph(path(3))


def test_cotree_is_canonical_under_relabelling():
    g = join(trivial(2), from_edges(["a", "b", "c"], [("a", "b")]))
    h = disjoint_union(from_edges(["a", "b"], [("a", "b")]), from_edges(["c"], []))
    h = join(from_edges(["1", "2"], []), h)
    assert str(cotree(g)) == str(cotree(h))


@pytest.mark.parametrize("n", range(1, 6))
def test_cograph_recognition_matches_p4_freeness(n):
    p4 = nx.path_graph(4)
    for edges in labelled_graphs(n):
        ng = nx.Graph()
        ng.add_nodes_from(range(n))
        ng.add_edges_from(edges)
        has_p4 = any(
            nx.is_isomorphic(ng.subgraph(s), p4) for s in itertools.combinations(range(n), 4)
        )
        g = from_edges(n, [(str(i + 1), str(j + 1)) for i, j in edges])
        assert is_cograph(g) == (not has_p4)
        if not has_p4:
            assert cotree(g).rebuild().same_graph(g)

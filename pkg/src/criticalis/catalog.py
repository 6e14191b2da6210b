"""Exhaustive small-graph catalogues (backed by networkx)."""

from __future__ import annotations

from typing import Iterator, List

import networkx as nx

from .sgraph import SignedMultidigraph, encode_graph6, from_edges

ATLAS_MAX_N = 7


def from_networkx(G: nx.Graph) -> SignedMultidigraph:
    nodes = list(G.nodes())
    pos = {u: i + 1 for i, u in enumerate(nodes)}
    return from_edges(len(nodes), [(str(pos[u]), str(pos[v])) for u, v in G.edges()])


def simple_graphs(max_n: int, connected: bool = False, min_n: int = 1) -> List[SignedMultidigraph]:
    """All simple graphs with min_n..max_n vertices, one per isomorphism class."""
    if max_n > ATLAS_MAX_N:
        raise ValueError(f"the atlas only reaches {ATLAS_MAX_N} vertices")
    out = []
    for G in nx.graph_atlas_g():
        n = G.number_of_nodes()
        if n < min_n or n > max_n:
            continue
        if connected and not nx.is_connected(G):
            continue
        out.append(from_networkx(G))
    return out


def trees(n: int) -> Iterator[SignedMultidigraph]:
    if n == 1:
        yield from_edges(1, [])
        return
    for T in nx.nonisomorphic_trees(n):
        yield from_networkx(T)


def graph6_lines(graphs) -> List[str]:
    return [encode_graph6(g) for g in graphs]


def clique_number(g: SignedMultidigraph) -> int:
    G = nx.Graph()
    G.add_nodes_from(g.vertices)
    G.add_edges_from(g.edges())
    return max((len(c) for c in nx.find_cliques(G)), default=0)


def independence_number(g: SignedMultidigraph) -> int:
    return clique_number(g.complement())

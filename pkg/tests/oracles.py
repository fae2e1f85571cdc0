"""Brute-force reference implementations used as test oracles.

Nothing here imports the code under test except the plain graph type.
"""

import itertools
from collections import Counter
from functools import lru_cache

import networkx as nx

from chromafun.graph import FiniteGraph


def from_nx(G) -> FiniteGraph:
    mapping = {v: k for k, v in enumerate(sorted(G.nodes()))}
    return FiniteGraph(len(mapping), frozenset((min(mapping[u], mapping[v]), max(mapping[u], mapping[v])) for u, v in G.edges()))


def to_nx(g: FiniteGraph):
    G = nx.Graph()
    G.add_nodes_from(range(g.vertex_count))
    G.add_edges_from(g.edges)
    return G


def atlas(max_vertices):
    """Every graph on at most ``max_vertices`` vertices up to isomorphism (max 7)."""
    return [from_nx(G) for G in nx.graph_atlas_g() if G.number_of_nodes() <= max_vertices]


def trees(n):
    if n == 1:
        return [FiniteGraph(1, frozenset())]
    return [from_nx(T) for T in nx.nonisomorphic_trees(n)]


def count_colorings(g: FiniteGraph, n: int) -> int:
    return sum(
        1
        for c in itertools.product(range(n), repeat=g.vertex_count)
        if all(c[u] != c[v] for u, v in g.edges)
    )


def set_partitions(items):
    """All set partitions of a list, built by inserting the last element."""
    if not items:
        yield []
        return
    *rest, last = items
    for p in set_partitions(rest):
        for i in range(len(p)):
            yield p[:i] + [p[i] + [last]] + p[i + 1 :]
        yield p + [[last]]


def stable_partitions(g: FiniteGraph):
    out = []
    for p in set_partitions(list(range(g.vertex_count))):
        if all(not (g.has_edge(u, v)) for b in p for u, v in itertools.combinations(b, 2)):
            out.append(sorted(sorted(b) for b in p))
    return out


def st_counts(g: FiniteGraph) -> dict:
    return dict(Counter(len(p) for p in stable_partitions(g)))


@lru_cache(maxsize=None)
def stirling2(n, k):
    if n == k:
        return 1
    if k == 0 or k > n:
        return 0
    return k * stirling2(n - 1, k) + stirling2(n - 1, k - 1)


def falling(x, k):
    out = 1
    for i in range(k):
        out *= x - i
    return out


def count_colorings_frontier(g: FiniteGraph, order, n: int) -> int:
    """Proper n-colorings counted vertex by vertex along ``order``.

    The state is the coloring of already-placed vertices that still have an
    unplaced neighbour, so memory stays small on long thin graphs.
    """
    pos = {v: i for i, v in enumerate(order)}
    last_use = {v: max([pos[w] for w in g.neighbors(v)] + [pos[v]]) for v in order}
    states = Counter({(): 1})
    frontier = []
    for i, v in enumerate(order):
        earlier = [frontier.index(w) for w in g.neighbors(v) if pos[w] < i]
        nxt = Counter()
        keep = [k for k, w in enumerate(frontier) if last_use[w] > i]
        for colors, ways in states.items():
            for x in range(n):
                if any(colors[k] == x for k in earlier):
                    continue
                new = tuple(colors[k] for k in keep)
                if last_use[v] > i:
                    new = new + (x,)
                nxt[new] += ways
        frontier = [frontier[k] for k in keep] + ([v] if last_use[v] > i else [])
        states = nxt
    return sum(states.values())


def falling_coeffs(k):
    """Coefficients of t(t-1)...(t-k+1), lowest degree first."""
    coeffs = [1]
    for i in range(k):
        # multiply by (t - i)
        nxt = [0] * (len(coeffs) + 1)
        for d, c in enumerate(coeffs):
            nxt[d + 1] += c
            nxt[d] -= i * c
        coeffs = nxt
    return coeffs

"""Finite simple graphs, graph homomorphisms and injections of color sets.

Vertices are dense integer indices ``0..n-1``.  Any names coming from input
files live in side tables owned by the caller.
"""

from __future__ import annotations

import enum
import itertools
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Sequence

from .errors import DomainError, StructuralError


class Infinite(enum.Enum):
    """Explicit marker for unbounded quantities (distances, chromatic numbers)."""

    INFINITE = "infinite"

    def __repr__(self):
        return "INFINITE"


INFINITE = Infinite.INFINITE


def _edge(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class FiniteGraph:
    vertex_count: int
    edges: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        n = self.vertex_count
        if n < 0:
            raise StructuralError(f"negative vertex count {n}")
        normalized = set()
        for e in self.edges:
            u, v = e
            if not (0 <= u < n and 0 <= v < n):
                raise StructuralError(f"edge {e} out of range for {n} vertices")
            if u == v:
                raise StructuralError(f"self-loop at vertex {u}")
            normalized.add(_edge(u, v))
        object.__setattr__(self, "edges", frozenset(normalized))

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence[int]]) -> FiniteGraph:
        return cls(n, frozenset(tuple(e) for e in edges))

    @cached_property
    def adjacency(self) -> tuple[frozenset, ...]:
        adj = [set() for _ in range(self.vertex_count)]
        for u, v in self.edges:
            adj[u].add(v)
            adj[v].add(u)
        return tuple(frozenset(a) for a in adj)

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self.edges)

    def has_edge(self, u: int, v: int) -> bool:
        return _edge(u, v) in self.edges

    def neighbors(self, v: int) -> frozenset:
        return self.adjacency[v]

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def delete_edge(self, u: int, v: int) -> FiniteGraph:
        return FiniteGraph(self.vertex_count, self.edges - {_edge(u, v)})

    def contract_edge(self, u: int, v: int) -> FiniteGraph:
        """Identify ``v`` into ``u``; parallel edges collapse, labels stay dense."""
        if u == v:
            raise DomainError("cannot contract a vertex with itself")
        if u > v:
            u, v = v, u

        def relabel(w):
            if w == v:
                w = u
            return w - 1 if w > v else w

        edges = set()
        for a, b in self.edges:
            if {a, b} == {u, v}:
                continue
            edges.add(_edge(relabel(a), relabel(b)))
        return FiniteGraph(self.vertex_count - 1, frozenset(edges))

    def induced(self, vertices: Sequence[int]) -> FiniteGraph:
        index = {v: i for i, v in enumerate(vertices)}
        edges = {
            _edge(index[a], index[b])
            for a, b in self.edges
            if a in index and b in index
        }
        return FiniteGraph(len(vertices), frozenset(edges))

    def is_independent(self, vertices: Iterable[int]) -> bool:
        vs = list(vertices)
        return not any(self.has_edge(a, b) for a, b in itertools.combinations(vs, 2))

    def components(self) -> list[list[int]]:
        seen = [False] * self.vertex_count
        comps = []
        for s in range(self.vertex_count):
            if seen[s]:
                continue
            seen[s] = True
            comp, queue = [s], deque([s])
            while queue:
                u = queue.popleft()
                for w in self.adjacency[u]:
                    if not seen[w]:
                        seen[w] = True
                        comp.append(w)
                        queue.append(w)
            comps.append(sorted(comp))
        return comps

    def is_connected(self) -> bool:
        return self.vertex_count <= 1 or len(self.components()) == 1

    def __repr__(self):
        return f"FiniteGraph({self.vertex_count}, {self.sorted_edges()})"


# -- standard families ------------------------------------------------------


def complete_graph(n: int) -> FiniteGraph:
    if n < 0:
        raise DomainError("vertex count must be nonnegative")
    return FiniteGraph(n, frozenset(itertools.combinations(range(n), 2)))


def edgeless_graph(n: int) -> FiniteGraph:
    return FiniteGraph(n, frozenset())


def path_graph(n: int) -> FiniteGraph:
    return FiniteGraph(n, frozenset((i, i + 1) for i in range(n - 1)))


def cycle_graph(n: int) -> FiniteGraph:
    if n < 3:
        raise DomainError("a simple cycle needs at least 3 vertices")
    return FiniteGraph(n, frozenset(_edge(i, (i + 1) % n) for i in range(n)))


def star_graph(leaves: int) -> FiniteGraph:
    """K_{1,leaves} with the center at vertex 0."""
    return FiniteGraph(leaves + 1, frozenset((0, i) for i in range(1, leaves + 1)))


def complete_minus_edge(n: int) -> FiniteGraph:
    """K_n with the edge {0, 1} removed."""
    if n < 2:
        raise DomainError("K_n - e needs n >= 2")
    return complete_graph(n).delete_edge(0, 1)


# -- homomorphisms ----------------------------------------------------------


@dataclass(frozen=True)
class GraphHom:
    source: FiniteGraph
    target: FiniteGraph
    map: tuple

    def __post_init__(self):
        object.__setattr__(self, "map", tuple(self.map))

    def __call__(self, v: int) -> int:
        return self.map[v]

    def compose(self, other: GraphHom) -> GraphHom:
        """``other ∘ self``: first apply self, then other."""
        if other.source != self.target:
            raise StructuralError("homomorphisms are not composable")
        return GraphHom(self.source, other.target, tuple(other.map[x] for x in self.map))

    def preimage(self, w: int) -> list[int]:
        return [v for v, x in enumerate(self.map) if x == w]


def _check_structure(h: GraphHom) -> None:
    if len(h.map) != h.source.vertex_count:
        raise StructuralError(
            f"map has length {len(h.map)}, source has {h.source.vertex_count} vertices"
        )
    m = h.target.vertex_count
    for v, x in enumerate(h.map):
        if not (isinstance(x, int) and 0 <= x < m):
            raise StructuralError(f"vertex {v} maps to {x!r}, outside [0, {m})")


def validate_hom(h: GraphHom) -> bool:
    """True iff every source edge lands on a target edge.

    Raises StructuralError for malformed maps, which is not the same as a
    well-formed map that fails to preserve edges.
    """
    _check_structure(h)
    return all(h.target.has_edge(h.map[u], h.map[v]) for u, v in h.source.edges)


def is_surjective_hom(h: GraphHom) -> bool:
    return len(set(h.map)) == h.target.vertex_count


def identity_hom(g: FiniteGraph) -> GraphHom:
    return GraphHom(g, g, tuple(range(g.vertex_count)))


def iter_homs(source: FiniteGraph, target: FiniteGraph) -> Iterator[GraphHom]:
    """All homomorphisms source -> target, by backtracking in vertex order."""
    n, m = source.vertex_count, target.vertex_count
    adj = source.adjacency
    assignment = [0] * n

    def extend(v):
        if v == n:
            yield GraphHom(source, target, tuple(assignment))
            return
        earlier = [u for u in adj[v] if u < v]
        for x in range(m):
            if all(target.has_edge(assignment[u], x) for u in earlier):
                assignment[v] = x
                yield from extend(v + 1)

    yield from extend(0)


# -- injections of finite color sets ---------------------------------------


@dataclass(frozen=True)
class Injection:
    """An injective map [source_size] -> [target_size]."""

    source_size: int
    target_size: int
    map: tuple

    def __post_init__(self):
        object.__setattr__(self, "map", tuple(self.map))
        if len(self.map) != self.source_size:
            raise StructuralError("injection map length differs from source size")
        if any(not (0 <= x < self.target_size) for x in self.map):
            raise StructuralError("injection value out of range")
        if len(set(self.map)) != len(self.map):
            raise DomainError(f"map {self.map} is not injective")

    def __call__(self, x: int) -> int:
        return self.map[x]

    def compose(self, other: Injection) -> Injection:
        """``other ∘ self``."""
        if other.source_size != self.target_size:
            raise StructuralError("injections are not composable")
        return Injection(self.source_size, other.target_size, tuple(other.map[x] for x in self.map))

    @classmethod
    def identity(cls, n: int) -> Injection:
        return cls(n, n, tuple(range(n)))


def all_injections(k: int, m: int) -> Iterator[Injection]:
    for image in itertools.permutations(range(m), k):
        yield Injection(k, m, image)


# -- metric and bipartiteness ------------------------------------------------


def bfs_distances(g: FiniteGraph, p: int) -> list:
    dist: list = [INFINITE] * g.vertex_count
    dist[p] = 0
    queue = deque([p])
    while queue:
        u = queue.popleft()
        for w in g.adjacency[u]:
            if dist[w] is INFINITE:
                dist[w] = dist[u] + 1
                queue.append(w)
    return dist


def adjacency_distance(g: FiniteGraph, p: int, v: int) -> int | Infinite:
    for x in (p, v):
        if not 0 <= x < g.vertex_count:
            raise StructuralError(f"vertex {x} out of range")
    return bfs_distances(g, p)[v]


def two_coloring(g: FiniteGraph) -> list[int] | None:
    """A proper 2-coloring by BFS, or None when an odd cycle exists."""
    side = [-1] * g.vertex_count
    for s in range(g.vertex_count):
        if side[s] != -1:
            continue
        side[s] = 0
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for w in g.adjacency[u]:
                if side[w] == -1:
                    side[w] = 1 - side[u]
                    queue.append(w)
                elif side[w] == side[u]:
                    return None
    return side


def has_odd_cycle(g: FiniteGraph) -> bool:
    return two_coloring(g) is None

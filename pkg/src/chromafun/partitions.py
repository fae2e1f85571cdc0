"""Stable partitions of finite graphs.

A partition of ``{0..n-1}`` is stored as its restricted-growth string: vertex
``v`` lies in block ``rgs[v]``, with ``rgs[0] == 0`` and each value at most one
more than the maximum before it.  Blocks are therefore numbered by their
smallest vertex, which gives every partition a canonical form and makes the
lexicographic order on strings a deterministic enumeration order.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .chromatic import StVector
from .errors import DomainError, ResourceError, StructuralError
from .graph import FiniteGraph, GraphHom, Injection, complete_graph, is_surjective_hom, validate_hom

DEFAULT_PARTITION_LIMIT = 10


@dataclass(frozen=True, order=True)
class Partition:
    rgs: tuple

    def __post_init__(self):
        rgs = tuple(self.rgs)
        top = -1
        for x in rgs:
            if not 0 <= x <= top + 1:
                raise StructuralError(f"{rgs} is not a restricted-growth string")
            top = max(top, x)
        object.__setattr__(self, "rgs", rgs)

    @classmethod
    def from_blocks(cls, n: int, blocks: Iterable[Iterable[int]]) -> Partition:
        """Canonicalize an arbitrary family of disjoint blocks covering [0, n)."""
        label = [-1] * n
        blist = [sorted(b) for b in blocks]
        if any(not b for b in blist):
            raise StructuralError("empty block")
        for i, b in enumerate(blist):
            for v in b:
                if not 0 <= v < n or label[v] != -1:
                    raise StructuralError(f"blocks overlap or leave range at vertex {v}")
                label[v] = i
        if -1 in label:
            raise StructuralError("blocks do not cover every vertex")
        return cls(_canonical(label))

    @property
    def size(self) -> int:
        return len(self.rgs)

    @property
    def block_count(self) -> int:
        return max(self.rgs) + 1 if self.rgs else 0

    @property
    def blocks(self) -> tuple[tuple[int, ...], ...]:
        out = [[] for _ in range(self.block_count)]
        for v, b in enumerate(self.rgs):
            out[b].append(v)
        return tuple(tuple(b) for b in out)

    def is_stable(self, g: FiniteGraph) -> bool:
        return all(self.rgs[u] != self.rgs[v] for u, v in g.edges)

    def to_json(self) -> list[list[int]]:
        return [list(b) for b in sorted(self.blocks)]

    def __repr__(self):
        return "Partition(" + "|".join(",".join(map(str, b)) for b in self.blocks) + ")"


# A stable partition is a Partition that has been checked against a graph.
StablePartition = Partition


def _canonical(labels: Sequence) -> tuple:
    relabel: dict = {}
    out = []
    for x in labels:
        if x not in relabel:
            relabel[x] = len(relabel)
        out.append(relabel[x])
    return tuple(out)


def enumerate_stable_partitions(
    g: FiniteGraph, *, limit: int = DEFAULT_PARTITION_LIMIT
) -> list[Partition]:
    """All stable partitions of ``g`` in restricted-growth-string order."""
    return list(iter_stable_partitions(g, limit=limit))


def iter_stable_partitions(
    g: FiniteGraph, *, limit: int = DEFAULT_PARTITION_LIMIT
) -> Iterator[Partition]:
    n = g.vertex_count
    if n > limit:
        raise ResourceError(f"{n} vertices exceeds the partition limit of {limit}")
    earlier = [[u for u in g.adjacency[v] if u < v] for v in range(n)]
    rgs = [0] * n

    def extend(v, top):
        if v == n:
            yield Partition(tuple(rgs))
            return
        for b in range(top + 2):
            # a block may not already hold a neighbour of v
            if any(rgs[u] == b for u in earlier[v]):
                continue
            rgs[v] = b
            yield from extend(v + 1, max(top, b))

    if n == 0:
        yield Partition(())
        return
    yield from extend(0, -1)


def st_counts(g: FiniteGraph, *, limit: int = DEFAULT_PARTITION_LIMIT) -> StVector:
    counts = Counter(p.block_count for p in iter_stable_partitions(g, limit=limit))
    return StVector.from_mapping(counts)


def partitions_by_size(
    g: FiniteGraph, *, limit: int = DEFAULT_PARTITION_LIMIT
) -> dict[int, list[Partition]]:
    out: dict[int, list[Partition]] = {}
    for p in iter_stable_partitions(g, limit=limit):
        out.setdefault(p.block_count, []).append(p)
    return out


def _check_proper(g: FiniteGraph, c: Sequence[int]) -> None:
    if len(c) != g.vertex_count:
        raise StructuralError(f"coloring has length {len(c)}, graph has {g.vertex_count} vertices")
    for u, v in g.edges:
        if c[u] == c[v]:
            raise DomainError(f"coloring is improper on edge ({u}, {v})")


def partition_of_coloring(g: FiniteGraph, c: Sequence[int]) -> Partition:
    """The partition into nonempty color classes of a proper coloring."""
    _check_proper(g, c)
    return Partition(_canonical(c))


def canonical_surjection(g: FiniteGraph, p: Partition) -> GraphHom:
    """The homomorphism onto K_{#blocks} sending each vertex to its block."""
    if p.size != g.vertex_count:
        raise StructuralError("partition and graph sizes differ")
    if not p.is_stable(g):
        raise DomainError(f"{p!r} is not stable")
    return GraphHom(g, complete_graph(p.block_count), p.rgs)


def decompose_coloring(
    g: FiniteGraph, c: Sequence[int], n: int | None = None
) -> tuple[Partition, Injection]:
    """Split a proper coloring into its partition and the block -> color injection.

    ``n`` is the size of the color set; it defaults to one more than the
    largest color used.
    """
    p = partition_of_coloring(g, c)
    if n is None:
        n = max(c) + 1 if len(c) else 0
    colors = [None] * p.block_count
    for v, b in enumerate(p.rgs):
        colors[b] = c[v]
    return p, Injection(p.block_count, n, tuple(colors))


def recompose_coloring(g: FiniteGraph, p: Partition, inj: Injection) -> tuple[int, ...]:
    if p.size != g.vertex_count:
        raise StructuralError("partition and graph sizes differ")
    if inj.source_size != p.block_count:
        raise StructuralError("injection source must index the blocks")
    if not p.is_stable(g):
        raise DomainError(f"{p!r} is not stable")
    return tuple(inj.map[b] for b in p.rgs)


def pullback_partition(phi: GraphHom, p: Partition) -> Partition:
    """Blocks phi^{-1}(pi) for pi in p; phi must be a surjective homomorphism."""
    if not validate_hom(phi):
        raise DomainError("not a graph homomorphism")
    if not is_surjective_hom(phi):
        raise DomainError("pullback along a non-surjective homomorphism leaves empty blocks")
    if p.size != phi.target.vertex_count:
        raise StructuralError("partition does not live on the target graph")
    if not p.is_stable(phi.target):
        raise DomainError(f"{p!r} is not stable on the target")
    return Partition(_canonical([p.rgs[x] for x in phi.map]))

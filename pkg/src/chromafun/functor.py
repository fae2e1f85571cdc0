"""Coloring sets as functors of the color set, and natural bijections between them.

Colors are ``0..n-1``.  A coloring is a tuple indexed by vertex.  Coloring
sets are enumerated in lexicographic order, which is also the order of their
base-``n`` codes, so membership lookups are binary searches.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Iterator, Sequence

import numpy as np

from .chromatic import StVector, chromatic_polynomial, evaluate
from .errors import DomainError, PreconditionError, ResourceError
from .graph import FiniteGraph, GraphHom, Injection, all_injections, complete_graph, validate_hom
from .partitions import (
    Partition,
    decompose_coloring,
    partitions_by_size,
    recompose_coloring,
)

DEFAULT_COLORING_BUDGET = 10**7


class CertificationError(PreconditionError):
    """A supplied family of bijections failed an exhaustive naturality check."""


@dataclass(frozen=True, eq=False)
class ColoringSet:
    graph: FiniteGraph
    color_count: int
    array: np.ndarray = field(repr=False)

    def __len__(self):
        return len(self.array)

    @property
    def colorings(self) -> list[tuple[int, ...]]:
        return [tuple(int(x) for x in row) for row in self.array]

    def __iter__(self):
        return iter(self.colorings)

    def __getitem__(self, i: int) -> tuple[int, ...]:
        return tuple(int(x) for x in self.array[i])

    @property
    def codes(self) -> np.ndarray:
        return _codes(self.array, self.color_count)

    def index_array(self, rows: np.ndarray) -> np.ndarray:
        """Positions of each row of ``rows`` in this set; raises if any is absent."""
        rows = np.asarray(rows, dtype=np.int64).reshape(-1, self.graph.vertex_count)
        if len(rows) == 0:
            return np.zeros(0, dtype=np.int64)
        codes = self.codes
        want = _codes(rows, self.color_count)
        pos = np.searchsorted(codes, want)
        if len(codes) == 0 or np.any(pos >= len(codes)) or np.any(codes[np.minimum(pos, len(codes) - 1)] != want):
            raise DomainError("a coloring is not a member of this coloring set")
        return pos

    def index(self, c: Sequence[int]) -> int:
        return int(self.index_array(np.asarray([c]))[0])


def _codes(rows: np.ndarray, n: int) -> np.ndarray:
    width = rows.shape[1] if rows.ndim == 2 else 0
    if width == 0:
        return np.zeros(len(rows), dtype=np.int64)
    if max(n, 2) ** width >= 2**62:
        raise ResourceError("coloring codes overflow 64-bit integers")
    weights = (max(n, 1) ** np.arange(width - 1, -1, -1)).astype(np.int64)
    return rows.astype(np.int64) @ weights


def _backtrack_colorings(g: FiniteGraph, n: int) -> list[tuple[int, ...]]:
    V = g.vertex_count
    earlier = [[u for u in g.adjacency[v] if u < v] for v in range(V)]
    out = []
    c = [0] * V

    def extend(v):
        if v == V:
            out.append(tuple(c))
            return
        for x in range(n):
            if all(c[u] != x for u in earlier[v]):
                c[v] = x
                extend(v + 1)

    extend(0)
    return out


@lru_cache(maxsize=256)
def _cached_coloring_set(g: FiniteGraph, n: int) -> ColoringSet:
    rows = _backtrack_colorings(g, n)
    arr = np.array(rows, dtype=np.int64).reshape(len(rows), g.vertex_count)
    arr.setflags(write=False)
    return ColoringSet(g, n, arr)


@lru_cache(maxsize=1024)
def _coloring_count(g: FiniteGraph, n: int) -> int:
    if g.vertex_count == 0:
        return 1
    return evaluate(chromatic_polynomial(g, vertex_limit=max(g.vertex_count, 12)), n)


def enumerate_colorings(
    g: FiniteGraph, n: int, *, budget: int = DEFAULT_COLORING_BUDGET
) -> ColoringSet:
    """All proper colorings V -> [n], lexicographically ordered."""
    if n < 0:
        raise DomainError("color count must be nonnegative")
    expected = _coloring_count(g, n)
    if expected > budget:
        raise ResourceError(f"{expected} colorings exceeds the budget of {budget}")
    return _cached_coloring_set(g, n)


def is_proper(g: FiniteGraph, c: Sequence[int]) -> bool:
    return len(c) == g.vertex_count and all(c[u] != c[v] for u, v in g.edges)


def pushforward(f: Injection, c: Sequence[int]) -> tuple[int, ...]:
    """f ∘ c: recolor along an injection of color sets."""
    for x in c:
        if not 0 <= x < f.source_size:
            raise DomainError(f"color {x} is outside the injection's source [0, {f.source_size})")
    return tuple(f.map[x] for x in c)


def pullback(phi: GraphHom, c: Sequence[int]) -> tuple[int, ...]:
    """c ∘ phi: a coloring of phi's target read back onto its source."""
    if not validate_hom(phi):
        raise DomainError("not a graph homomorphism")
    if not is_proper(phi.target, c):
        raise DomainError("coloring is not proper on the homomorphism's target")
    return tuple(c[x] for x in phi.map)


def coloring_to_hom(g: FiniteGraph, c: Sequence[int], n: int) -> GraphHom:
    if not is_proper(g, c):
        raise DomainError("coloring is not proper")
    h = GraphHom(g, complete_graph(n), tuple(c))
    validate_hom(h)
    return h


def hom_to_coloring(h: GraphHom) -> tuple[int, ...]:
    n = h.target.vertex_count
    if h.target.edge_count != n * (n - 1) // 2:
        raise DomainError("target is not a complete graph")
    if not validate_hom(h):
        raise DomainError("not a graph homomorphism")
    return h.map


# -- families of bijections --------------------------------------------------


class BijectionFamily:
    """A family r_n : χ(g1, [n]) -> χ(g2, [n]), stored as index tables."""

    g1: FiniteGraph
    g2: FiniteGraph

    def indices(self, n: int) -> np.ndarray:
        raise NotImplementedError

    def component(self, c: Sequence[int], n: int) -> tuple[int, ...]:
        i = enumerate_colorings(self.g1, n).index(c)
        return enumerate_colorings(self.g2, n)[int(self.indices(n)[i])]

    def is_bijective(self, n: int) -> bool:
        table = self.indices(n)
        size = len(enumerate_colorings(self.g2, n))
        return len(table) == size and len(np.unique(table)) == size


@dataclass(eq=False)
class ExplicitFamily(BijectionFamily):
    g1: FiniteGraph
    g2: FiniteGraph
    tables: dict

    def indices(self, n: int) -> np.ndarray:
        if n not in self.tables:
            raise DomainError(f"family has no component at {n} colors")
        return np.asarray(self.tables[n], dtype=np.int64)

    @property
    def bound(self) -> int:
        return max(self.tables)


@dataclass(eq=False)
class NaturalBijection(BijectionFamily):
    """The isomorphism of coloring functors induced by a matching of stable partitions.

    Only the matching is stored; each component is computed when asked for.
    """

    g1: FiniteGraph
    g2: FiniteGraph
    partitions1: dict
    partitions2: dict
    matching: dict
    _tables: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        self._forward = {
            k: {self.partitions1[k][i]: self.partitions2[k][j] for i, j in pairs}
            for k, pairs in self.matching.items()
        }

    def match(self, p: Partition) -> Partition:
        return self._forward[p.block_count][p]

    def component(self, c: Sequence[int], n: int | None = None) -> tuple[int, ...]:
        p, inj = decompose_coloring(self.g1, c, n)
        return recompose_coloring(self.g2, self.match(p), inj)

    def indices(self, n: int) -> np.ndarray:
        if n not in self._tables:
            # every coloring is f ∘ rgs(Π) for one Π and one injection f of its blocks
            source = enumerate_colorings(self.g1, n)
            target = enumerate_colorings(self.g2, n)
            table = np.full(len(source), -1, dtype=np.int64)
            for k, pairs in self.matching.items():
                if k > n:
                    continue
                fs = _injection_array(k, n)
                for i, j in pairs:
                    rgs1 = np.asarray(self.partitions1[k][i].rgs, dtype=np.int64)
                    rgs2 = np.asarray(self.partitions2[k][j].rgs, dtype=np.int64)
                    table[source.index_array(fs[:, rgs1])] = target.index_array(fs[:, rgs2])
            self._tables[n] = table
        return self._tables[n]

    def to_json(self) -> dict:
        from .graph6 import emit_graph6

        return {
            "g1": emit_graph6(self.g1),
            "g2": emit_graph6(self.g2),
            "matching": {str(k): [list(pair) for pair in pairs] for k, pairs in sorted(self.matching.items())},
        }


@lru_cache(maxsize=64)
def _injection_array(k: int, n: int) -> np.ndarray:
    """All injections [k] -> [n] as rows of images."""
    arr = np.array(list(itertools.permutations(range(n), k)), dtype=np.int64).reshape(-1, k)
    arr.setflags(write=False)
    return arr


def build_natural_bijection(g1: FiniteGraph, g2: FiniteGraph, **limits) -> NaturalBijection:
    """Match St_k(g1) with St_k(g2) in enumeration order, for every k.

    Raises DomainError naming the first k whose counts differ.
    """
    p1 = partitions_by_size(g1, **limits)
    p2 = partitions_by_size(g2, **limits)
    for k in sorted(set(p1) | set(p2)):
        a, b = len(p1.get(k, [])), len(p2.get(k, []))
        if a != b:
            raise DomainError(
                f"not chromatically equivalent: #St_{k} is {a} for the first graph and {b} for the second"
            )
    matching = {k: tuple((i, i) for i in range(len(p1[k]))) for k in p1}
    return NaturalBijection(g1, g2, p1, p2, matching)


def verify_naturality(
    r: BijectionFamily, f: Injection, *, budget: int = DEFAULT_COLORING_BUDGET
) -> bool:
    """Exhaustively check r_m ∘ f_* == f_* ∘ r_k on χ(g1, [k]) for f: [k] -> [m].

    Refuses (ResourceError) rather than sampling when the sets are too large.
    """
    k, m = f.source_size, f.target_size
    for g, n in ((r.g1, k), (r.g1, m), (r.g2, k), (r.g2, m)):
        enumerate_colorings(g, n, budget=budget)
    src_k = enumerate_colorings(r.g1, k)
    if len(src_k) == 0:
        return True
    fmap = np.asarray(f.map, dtype=np.int64)
    lhs = r.indices(m)[enumerate_colorings(r.g1, m).index_array(fmap[src_k.array])]
    moved = enumerate_colorings(r.g2, k).array[r.indices(k)]
    rhs = enumerate_colorings(r.g2, m).index_array(fmap[moved])
    return bool(np.array_equal(lhs, rhs))


def verify_all_injections(r: BijectionFamily, max_colors: int, **kw) -> dict:
    """Naturality over every injection [k] -> [m] with k <= m <= max_colors."""
    checked = failed = 0
    first_failure = None
    for m in range(max_colors + 1):
        for k in range(m + 1):
            for f in all_injections(k, m):
                checked += 1
                if not verify_naturality(r, f, **kw):
                    failed += 1
                    if first_failure is None:
                        first_failure = f
    bijective = all(r.is_bijective(n) for n in range(max_colors + 1))
    return {
        "injections_checked": checked,
        "failures": failed,
        "first_failure": None if first_failure is None else list(first_failure.map),
        "bijective": bijective,
        "natural": failed == 0 and bijective,
    }


# -- exhaustive search over natural families ----------------------------------


def enumerate_natural_families(
    g1: FiniteGraph, g2: FiniteGraph, bound: int
) -> Iterator[ExplicitFamily]:
    """Every natural family of bijections χ(g1, [x]) -> χ(g2, [x]), 0 <= x <= bound.

    Each proper coloring of g1 is f ∘ c0 for exactly one surjective
    restricted-growth coloring c0 and one injection f, so a natural family
    is fixed by its values on those c0.  The search tries every value for
    each c0, propagates along all injections and backtracks on collisions;
    survivors are bijective and re-checked against every injection.
    """
    levels = range(bound + 1)
    src = {x: enumerate_colorings(g1, x) for x in levels}
    dst = {x: enumerate_colorings(g2, x) for x in levels}
    if any(len(src[x]) != len(dst[x]) for x in levels):
        return

    reps = [
        p.rgs
        for k, ps in sorted(partitions_by_size(g1).items())
        if k <= bound
        for p in ps
    ]
    # for each representative and level: (injection array, positions in src[x])
    orbits = []
    for c0 in reps:
        k = max(c0) + 1 if c0 else 0
        per_level = {}
        for x in range(k, bound + 1):
            fs = _injection_array(k, x)
            rows = fs[:, np.asarray(c0, dtype=np.int64)] if len(c0) else np.zeros((len(fs), 0), np.int64)
            per_level[x] = (fs, src[x].index_array(rows))
        orbits.append((k, per_level))

    tables = {x: np.full(len(src[x]), -1, dtype=np.int64) for x in levels}
    used = {x: np.zeros(len(dst[x]), dtype=bool) for x in levels}

    def place(i):
        if i == len(orbits):
            if all((tables[x] >= 0).all() for x in levels):
                fam = ExplicitFamily(g1, g2, {x: tables[x].copy() for x in levels})
                if all(
                    verify_naturality(fam, f)
                    for m in levels
                    for kk in range(m + 1)
                    for f in all_injections(kk, m)
                ):
                    yield fam
            return
        k, per_level = orbits[i]
        for v in dst[k].array:
            assigned = []
            ok = True
            for x, (fs, positions) in per_level.items():
                images = fs[:, v] if len(v) else np.zeros((len(fs), 0), np.int64)
                targets = dst[x].index_array(images)
                if len(np.unique(targets)) != len(targets) or used[x][targets].any():
                    ok = False
                    break
                used[x][targets] = True
                tables[x][positions] = targets
                assigned.append((x, positions, targets))
            if ok:
                yield from place(i + 1)
            for x, positions, targets in assigned:
                used[x][targets] = False
                tables[x][positions] = -1

    yield from place(0)


def find_natural_family(g1: FiniteGraph, g2: FiniteGraph, bound: int) -> ExplicitFamily | None:
    return next(enumerate_natural_families(g1, g2, bound), None)


def induced_family(beta: Sequence[int], a: int, bound: int) -> ExplicitFamily:
    """β^*: χ(K_a, X) -> χ(K_b, X), c -> c ∘ β, for a bijection β: [b] -> [a]."""
    b = len(beta)
    ka, kb = complete_graph(a), complete_graph(b)
    beta_arr = np.asarray(beta, dtype=np.int64)
    tables = {}
    for x in range(bound + 1):
        src = enumerate_colorings(ka, x)
        rows = src.array[:, beta_arr] if b else np.zeros((len(src), 0), np.int64)
        tables[x] = enumerate_colorings(kb, x).index_array(rows)
    return ExplicitFamily(ka, kb, tables)


def yoneda_extract(family: BijectionFamily, a: int, b: int, bound: int) -> tuple[int, ...]:
    """Recover β with family = β^* from an isomorphism χ(K_a, ·) -> χ(K_b, ·).

    β is the image of the identity coloring of K_a.  The claim family = β^*
    is then certified on every component up to ``bound`` colors.
    """
    if a != b:
        raise DomainError(f"χ(K_{a}, ·) and χ(K_{b}, ·) cannot be isomorphic when {a} != {b}")
    if bound < a:
        raise DomainError("the bound must reach the identity coloring's color set")
    beta = family.component(tuple(range(a)), a)
    expected = induced_family(beta, a, bound)
    for x in range(bound + 1):
        if not np.array_equal(family.indices(x), expected.indices(x)):
            raise CertificationError(
                f"component at {x} colors is not induced by β = {beta}", witness=x
            )
    return tuple(beta)


def block_size_multiset(partitions: Iterable[Partition]) -> tuple[int, ...]:
    return tuple(sorted(p.block_count for p in partitions))


def decomposition_report(g: FiniteGraph, **limits) -> dict:
    """χ(g, ·) as a disjoint union of complete-graph functors χ(K_k, ·)."""
    by_size = partitions_by_size(g, **limits)
    terms = {k: len(ps) for k, ps in sorted(by_size.items())}
    pieces = []
    for k, count in terms.items():
        pieces.extend([f"χ(K_{k}, ·)"] * count)
    return {
        "st": StVector.from_mapping(terms).to_json()["st"],
        "summands": sum(terms.values()),
        "text": "χ(G, ·) ≅ " + (" ⊔ ".join(pieces) if pieces else "∅"),
    }

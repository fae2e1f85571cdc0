"""Countable graphs with a finite description, and the cardinality of their coloring sets.

The supported graphs form a closed set of families:

* ``Strip``: a periodic graph with finite cross-section.  A cell of
  ``cell_size`` vertices repeats along ℕ (one-way) or ℤ (two-way); ``intra``
  edges live inside a cell and an ``inter`` pair (u, v) joins vertex u of cell
  t to vertex v of cell t+1.  A one-way strip may carry a finite ``head``
  graph glued to cell 0 through ``head_inter`` pairs (head vertex, cell vertex).
* ``NaturalTree``: the one-way infinite path on ℕ.
* ``NaturalWheel``: the infinite star with center 0.
* ``CompleteMinusEdge``: the complete graph on ℕ without the edge {0, 1}.

Proper [n]-colorings of a strip are the infinite walks of its transfer
digraph, whose states are the proper colorings of one cell.  The number of
such walks is finite, countably infinite or the continuum, and the three
cases are told apart by the strongly connected components of the states that
admit infinite continuations.
"""

from __future__ import annotations

import enum
import itertools
import json
import math
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Callable, Iterator, Mapping

import networkx as nx

from .errors import DomainError, ParseError, PreconditionError, ResourceError, StructuralError
from .graph import INFINITE, FiniteGraph, GraphHom, Infinite, bfs_distances, path_graph, two_coloring
from .graph6 import emit_graph6, parse_graph6

DEFAULT_STATE_BUDGET = 10**6
DEFAULT_PROBE = 200


class Inapplicable(enum.Enum):
    """The finite-chromatic-number criterion does not cover the input."""

    INAPPLICABLE = "inapplicable"


INAPPLICABLE = Inapplicable.INAPPLICABLE


@dataclass(frozen=True, order=True)
class Cardinality:
    """One of Finite(count), ℵ₀ or 2^ℵ₀.  Ordered by size."""

    rank: int
    count: int = 0

    @classmethod
    def finite(cls, count: int) -> Cardinality:
        if count < 0:
            raise ValueError("negative cardinality")
        return cls(0, int(count))

    @property
    def is_finite(self) -> bool:
        return self.rank == 0

    def to_json(self):
        if self.rank == 0:
            return {"finite": str(self.count)}
        return "aleph0" if self.rank == 1 else "continuum"

    @classmethod
    def from_json(cls, obj) -> Cardinality:
        if obj == "aleph0":
            return ALEPH0
        if obj == "continuum":
            return CONTINUUM
        return cls.finite(int(obj["finite"]))

    def __str__(self):
        return str(self.count) if self.rank == 0 else ("aleph_0" if self.rank == 1 else "2^aleph_0")

    def __repr__(self):
        return f"Finite({self.count})" if self.rank == 0 else ("Aleph0" if self.rank == 1 else "Continuum")


ALEPH0 = Cardinality(1)
CONTINUUM = Cardinality(2)


# -- families ---------------------------------------------------------------------


class CountableGraph:
    """A countably infinite graph with total adjacency and a vertex enumeration."""

    name = "countable"

    def vertices(self) -> Iterator:
        raise NotImplementedError

    def adjacent(self, u, v) -> bool:
        raise NotImplementedError

    def first_vertices(self, k: int) -> list:
        return list(itertools.islice(self.vertices(), k))


@dataclass(frozen=True)
class StripSpec:
    cell_size: int
    intra: frozenset = frozenset()
    inter: frozenset = frozenset()
    two_way: bool = False
    head: FiniteGraph | None = None
    head_inter: frozenset = frozenset()

    def __post_init__(self):
        k = self.cell_size
        if k < 1:
            raise StructuralError("cell_size must be at least 1")
        intra = set()
        for u, v in self.intra:
            if u == v:
                raise StructuralError(f"self-loop at cell vertex {u}")
            if not (0 <= u < k and 0 <= v < k):
                raise StructuralError(f"intra edge ({u}, {v}) out of range")
            intra.add((min(u, v), max(u, v)))
        inter = set()
        for u, v in self.inter:
            if not (0 <= u < k and 0 <= v < k):
                raise StructuralError(f"inter edge ({u}, {v}) out of range")
            inter.add((u, v))
        head_inter = set()
        if self.head is not None:
            if self.two_way:
                raise StructuralError("a head only makes sense on a one-way strip")
            for h, v in self.head_inter:
                if not (0 <= h < self.head.vertex_count and 0 <= v < k):
                    raise StructuralError(f"head edge ({h}, {v}) out of range")
                head_inter.add((h, v))
        elif self.head_inter:
            raise StructuralError("head_inter given without a head")
        object.__setattr__(self, "intra", frozenset(intra))
        object.__setattr__(self, "inter", frozenset(inter))
        object.__setattr__(self, "head_inter", frozenset(head_inter))

    def to_json(self) -> dict:
        out = {
            "cell": self.cell_size,
            "intra": sorted([list(e) for e in self.intra]),
            "inter": sorted([list(e) for e in self.inter]),
            "two_way": self.two_way,
        }
        if self.head is not None:
            out["head"] = emit_graph6(self.head)
            out["head_inter"] = sorted([list(e) for e in self.head_inter])
        return out

    @classmethod
    def from_json(cls, obj: Mapping) -> StripSpec:
        try:
            head = parse_graph6(obj["head"]) if obj.get("head") else None
            return cls(
                int(obj["cell"]),
                frozenset(tuple(e) for e in obj.get("intra", [])),
                frozenset(tuple(e) for e in obj.get("inter", [])),
                bool(obj.get("two_way", False)),
                head,
                frozenset(tuple(e) for e in obj.get("head_inter", [])),
            )
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, ParseError):
                raise
            raise ParseError(f"invalid strip description: {exc}") from exc


@dataclass(frozen=True)
class Strip(CountableGraph):
    """Vertices are (t, i) for cell t and position i; head vertices are (-1, h)."""

    spec: StripSpec
    name: str = "strip"

    @property
    def head_size(self) -> int:
        return self.spec.head.vertex_count if self.spec.head is not None else 0

    def vertices(self):
        for h in range(self.head_size):
            yield (-1, h)
        cells = itertools.count() if not self.spec.two_way else _integers()
        for t in cells:
            for i in range(self.spec.cell_size):
                yield (t, i)

    def _is_vertex(self, v) -> bool:
        t, i = v
        if t == -1 and not self.spec.two_way and self.spec.head is not None:
            return 0 <= i < self.head_size
        if not self.spec.two_way and t < 0:
            return False
        return 0 <= i < self.spec.cell_size

    def neighbors(self, v) -> list:
        t, i = v
        s = self.spec
        out = []
        if t == -1 and not s.two_way:
            out.extend((-1, w) for w in s.head.adjacency[i])
            out.extend((0, c) for h, c in s.head_inter if h == i)
            return sorted(out)
        out.extend((t, b if a == i else a) for a, b in s.intra if i in (a, b))
        out.extend((t + 1, b) for a, b in s.inter if a == i)
        if s.two_way or t > 0:
            out.extend((t - 1, a) for a, b in s.inter if b == i)
        if t == 0 and s.head is not None:
            out.extend((-1, h) for h, c in s.head_inter if c == i)
        return sorted(set(out))

    def adjacent(self, u, v) -> bool:
        if not (self._is_vertex(u) and self._is_vertex(v)):
            return False
        return v in self.neighbors(u)

    def max_degree(self) -> int:
        probe = [(-1, h) for h in range(self.head_size)]
        for t in (0, 1, 2):
            probe.extend((t, i) for i in range(self.spec.cell_size))
        return max(len(self.neighbors(v)) for v in probe)

    def truncation(self, length: int) -> tuple[FiniteGraph, list]:
        """The finite induced subgraph on the head and cells 0..length-1."""
        verts = [(-1, h) for h in range(self.head_size)]
        verts += [(t, i) for t in range(length) for i in range(self.spec.cell_size)]
        index = {v: k for k, v in enumerate(verts)}
        edges = set()
        for v in verts:
            for w in self.neighbors(v):
                if w in index:
                    a, b = index[v], index[w]
                    edges.add((min(a, b), max(a, b)))
        return FiniteGraph(len(verts), frozenset(edges)), verts


def _integers():
    yield 0
    for k in itertools.count(1):
        yield k
        yield -k


@dataclass(frozen=True)
class NaturalTree(CountableGraph):
    name: str = "natural-tree"

    def vertices(self):
        return itertools.count()

    def adjacent(self, u, v) -> bool:
        return u >= 0 and v >= 0 and abs(u - v) == 1

    def neighbors(self, v) -> list:
        return [w for w in (v - 1, v + 1) if w >= 0]

    @property
    def strip(self) -> Strip:
        return Strip(StripSpec(1, frozenset(), frozenset({(0, 0)})), name=self.name)


@dataclass(frozen=True)
class NaturalWheel(CountableGraph):
    name: str = "natural-wheel"

    def vertices(self):
        return itertools.count()

    def adjacent(self, u, v) -> bool:
        return u != v and min(u, v) == 0 and max(u, v) > 0


@dataclass(frozen=True)
class CompleteMinusEdge(CountableGraph):
    """K_ℕ without the edge {0, 1}."""

    name: str = "complete-minus-edge"

    def vertices(self):
        return itertools.count()

    def adjacent(self, u, v) -> bool:
        return u != v and {u, v} != {0, 1}

    def stable_partition_report(self) -> dict:
        return {
            "partitions": [
                "all singletons {{x} : x in N}",
                "singletons off {0, 1}, together with the block {0, 1}",
            ],
            "block_counts": ["aleph0", "aleph0"],
            "functor": "χ(K', ·) ≅ χ(K_N, ·) ⊔ χ(K_N, ·)",
            "conclusion": (
                "two stable partitions with aleph0 blocks each, against one for K_N; "
                "a partition-preserving bijection cannot exist, so the functors differ "
                "although both graphs have chromatic number aleph0 and 2^aleph0 colorings "
                "with aleph0 colors"
            ),
        }


def fig3_g1() -> Strip:
    """Triangular ladder: a bottom path, each top vertex joined to two consecutive bottom ones.

    Cell t holds the bottom vertex b_t (0) and the top vertex above b_{t+1} (1).
    """
    return Strip(StripSpec(2, frozenset({(0, 1)}), frozenset({(0, 0), (1, 0)})), name="fig3-g1")


def fig3_g2() -> Strip:
    """fig3-g1 plus the top rail."""
    return Strip(StripSpec(2, frozenset({(0, 1)}), frozenset({(0, 0), (1, 0), (1, 1)})), name="fig3-g2")


def fig3_g3() -> Strip:
    """Two-way grid of height 4 with verticals, horizontals and one diagonal per square."""
    intra = frozenset({(0, 1), (1, 2), (2, 3)})
    inter = frozenset({(r, r) for r in range(4)} | {(r, r + 1) for r in range(3)})
    return Strip(StripSpec(4, intra, inter, two_way=True), name="fig3-g3")


def two_way_tree() -> Strip:
    return Strip(StripSpec(1, frozenset(), frozenset({(0, 0)}), two_way=True), name="two-way-tree")


FIXTURES: dict[str, Callable[[], CountableGraph]] = {
    "natural-tree": NaturalTree,
    "natural-wheel": NaturalWheel,
    "fig3-g1": fig3_g1,
    "fig3-g2": fig3_g2,
    "fig3-g3": fig3_g3,
    "two-way-tree": two_way_tree,
    "complete-minus-edge": CompleteMinusEdge,
}


def load_countable(name_or_json: str) -> CountableGraph:
    """A fixture by name, or a strip from its JSON description."""
    if name_or_json in FIXTURES:
        return FIXTURES[name_or_json]()
    try:
        obj = json.loads(name_or_json)
    except json.JSONDecodeError as exc:
        raise ParseError(
            f"unknown fixture {name_or_json!r} and not valid JSON: {exc.msg}", exc.pos
        ) from exc
    if not isinstance(obj, dict):
        raise ParseError("strip JSON must be an object")
    return Strip(StripSpec.from_json(obj))


def _as_strip(g: CountableGraph) -> Strip | None:
    if isinstance(g, Strip):
        return g
    if isinstance(g, NaturalTree):
        return g.strip
    return None


# -- transfer digraph ---------------------------------------------------------------


def _cell_colorings(k: int, edges, n: int) -> list[tuple]:
    out = []
    c = [0] * k
    earlier = [[a for a, b in edges if b == v] + [b for a, b in edges if a == v and b < v] for v in range(k)]

    def extend(v):
        if v == k:
            out.append(tuple(c))
            return
        for x in range(n):
            if all(c[u] != x for u in earlier[v]):
                c[v] = x
                extend(v + 1)

    extend(0)
    return out


def _head_weight(head: FiniteGraph, head_inter, state, n: int) -> int:
    """Number of proper colorings of the head compatible with cell 0's state."""
    hv = head.vertex_count
    forbidden = [{state[c] for h, c in head_inter if h == v} for v in range(hv)]
    earlier = [[u for u in head.adjacency[v] if u < v] for v in range(hv)]
    c = [0] * hv

    def count(v):
        if v == hv:
            return 1
        total = 0
        for x in range(n):
            if x not in forbidden[v] and all(c[u] != x for u in earlier[v]):
                c[v] = x
                total += count(v + 1)
        return total

    return count(0)


@dataclass
class TransferDigraph:
    strip: Strip
    n: int
    states: list
    arcs: list  # arcs[s] = sorted successor indices
    weights: list  # number of head colorings compatible with each state (1 without head)

    @property
    def two_way(self) -> bool:
        return self.strip.spec.two_way

    @property
    def arc_count(self) -> int:
        return sum(len(a) for a in self.arcs)

    @cached_property
    def predecessors(self) -> list:
        pred = [[] for _ in self.states]
        for s, succ in enumerate(self.arcs):
            for t in succ:
                pred[t].append(s)
        return pred

    def start_states(self) -> list[int]:
        return [s for s, w in enumerate(self.weights) if w > 0]

    def count_walks(self, length: int) -> int:
        """Weighted number of walks s_0 .. s_{length-1}: colorings of the truncation."""
        if length == 0:
            return sum(self.weights) if self.strip.spec.head is None else _head_only_count(self.strip, self.n)
        ways = list(self.weights)
        for _ in range(length - 1):
            nxt = [0] * len(self.states)
            for s, w in enumerate(ways):
                if w:
                    for t in self.arcs[s]:
                        nxt[t] += w
            ways = nxt
        return sum(ways)

    def as_networkx(self, keep=None) -> nx.DiGraph:
        d = nx.DiGraph()
        nodes = range(len(self.states)) if keep is None else sorted(keep)
        d.add_nodes_from(nodes)
        for s in nodes:
            for t in self.arcs[s]:
                if keep is None or t in keep:
                    d.add_edge(s, t)
        return d


def _head_only_count(strip: Strip, n: int) -> int:
    head = strip.spec.head
    return _head_weight(head, frozenset(), (), n)


def build_transfer_digraph(
    g: CountableGraph | StripSpec, n: int, *, budget: int = DEFAULT_STATE_BUDGET
) -> TransferDigraph:
    strip = Strip(g) if isinstance(g, StripSpec) else _as_strip(g)
    if strip is None:
        raise DomainError(f"{type(g).__name__} has no finite cross-section")
    spec = strip.spec
    if n ** spec.cell_size > budget:
        raise ResourceError(f"{n}^{spec.cell_size} candidate states exceeds the budget of {budget}")
    states = _cell_colorings(spec.cell_size, sorted(spec.intra), n)
    inter = sorted(spec.inter)
    arcs = [
        [b for b, tb in enumerate(states) if all(ta[u] != tb[v] for u, v in inter)]
        for ta in states
    ]
    if spec.head is None:
        weights = [1] * len(states)
    else:
        weights = [_head_weight(spec.head, spec.head_inter, s, n) for s in states]
    return TransferDigraph(strip, n, states, arcs, weights)


# -- classification ----------------------------------------------------------------


def live_states(td: TransferDigraph) -> tuple[set, int]:
    """States with an infinite continuation (both directions on a two-way strip).

    Returns the set and the number of removal rounds until it stabilized.
    """
    alive = set(range(len(td.states)))
    rounds = 0
    while True:
        rounds += 1
        dead = {s for s in alive if not any(t in alive for t in td.arcs[s])}
        if td.two_way:
            dead |= {s for s in alive if not any(p in alive for p in td.predecessors[s])}
        if not dead:
            return alive, rounds
        alive -= dead


@dataclass
class StripAnalysis:
    cardinality: Cardinality
    live: set
    live_rounds: int
    relevant: set  # live states that can occur in some coloring
    cycles: list = field(default_factory=list)  # simple cycles when no branching occurs
    branch: tuple | None = None  # (state, successor_a, successor_b) inside one SCC
    exit_arc: tuple | None = None  # (cycle state, state outside its SCC)


def analyze_transfer(td: TransferDigraph) -> StripAnalysis:
    live, rounds = live_states(td)
    if td.two_way:
        relevant = set(live)
    else:
        starts = [s for s in td.start_states() if s in live]
        relevant = set(starts)
        queue = deque(starts)
        while queue:
            s = queue.popleft()
            for t in td.arcs[s]:
                if t in live and t not in relevant:
                    relevant.add(t)
                    queue.append(t)

    d = td.as_networkx(relevant)
    scc_of = {}
    cyclic = []
    for comp in nx.strongly_connected_components(d):
        comp = set(comp)
        for s in comp:
            scc_of[s] = frozenset(comp)
        if len(comp) > 1 or any(d.has_edge(s, s) for s in comp):
            cyclic.append(comp)

    for comp in sorted(cyclic, key=min):
        for s in sorted(comp):
            inside = [t for t in sorted(d.successors(s)) if t in comp]
            if len(inside) >= 2:
                return StripAnalysis(CONTINUUM, live, rounds, relevant, branch=(s, inside[0], inside[1]))

    cycles = [_cycle_order(d, comp) for comp in sorted(cyclic, key=min)]
    for cyc in cycles:
        comp = scc_of[cyc[0]]
        for s in cyc:
            for t in sorted(d.successors(s)):
                if t not in comp:
                    return StripAnalysis(ALEPH0, live, rounds, relevant, cycles, exit_arc=(s, t))

    if td.two_way:
        total = sum(len(c) for c in cycles)
    else:
        on_cycle = {s for c in cycles for s in c}
        total = sum(td.weights[s] * _paths_into_cycles(d, s, on_cycle, {}) for s in td.start_states() if s in relevant)
    return StripAnalysis(Cardinality.finite(total), live, rounds, relevant, cycles)


def _cycle_order(d: nx.DiGraph, comp: set) -> list:
    start = min(comp)
    order = [start]
    s = next(t for t in d.successors(start) if t in comp)
    while s != start:
        order.append(s)
        s = next(t for t in d.successors(s) if t in comp)
    return order


def _paths_into_cycles(d, s, on_cycle, memo) -> int:
    if s in on_cycle:
        return 1
    if s not in memo:
        memo[s] = sum(_paths_into_cycles(d, t, on_cycle, memo) for t in d.successors(s))
    return memo[s]


def count_colorings(g: CountableGraph, n: int, **kw) -> Cardinality:
    """#χ(g, [n]) as Finite(c), ℵ₀ or 2^ℵ₀."""
    if n < 0:
        raise DomainError("color count must be nonnegative")
    if isinstance(g, NaturalWheel):
        # center takes any color; each of the infinitely many spokes picks from n - 1
        if n <= 1:
            return Cardinality.finite(0)
        return Cardinality.finite(n) if n == 2 else CONTINUUM
    if isinstance(g, CompleteMinusEdge):
        # contains arbitrarily large cliques
        return Cardinality.finite(0)
    return analyze_transfer(build_transfer_digraph(g, n, **kw)).cardinality


def chromatic_number_countable(g: CountableGraph, **kw) -> int | Infinite:
    if isinstance(g, CompleteMinusEdge):
        return INFINITE
    if isinstance(g, NaturalWheel):
        return next(n for n in itertools.count(1) if count_colorings(g, n) != Cardinality.finite(0))
    strip = _as_strip(g)
    if strip is None:
        raise DomainError(f"unsupported family {type(g).__name__}")
    # a locally finite graph of maximum degree D is (D + 1)-colorable
    for n in range(1, strip.max_degree() + 2):
        if count_colorings(strip, n, **kw) != Cardinality.finite(0):
            return n
    raise AssertionError("greedy bound violated")


def decide_equivalent_countable(g1: CountableGraph, g2: CountableGraph, **kw) -> bool | Inapplicable:
    """Same finite chromatic number n and the same number of [n]-colorings."""
    n1 = chromatic_number_countable(g1, **kw)
    n2 = chromatic_number_countable(g2, **kw)
    if n1 is INFINITE or n2 is INFINITE:
        return INAPPLICABLE
    if n1 != n2:
        return False
    return count_colorings(g1, n1, **kw) == count_colorings(g2, n2, **kw)


def st_cardinality(g: CountableGraph, k: int, **kw) -> Cardinality:
    """#St_k(g) for a countable graph of finite chromatic number."""
    if k < 1:
        raise DomainError("k must be at least 1")
    n = chromatic_number_countable(g, **kw)
    if n is INFINITE:
        raise DomainError("chromatic number is infinite")
    if k > n:
        # every supported family has an infinite color class to split
        return CONTINUUM
    counts = [count_colorings(g, i, **kw) for i in range(1, k + 1)]
    infinite = [c for c in counts if not c.is_finite]
    if infinite:
        return max(infinite)
    st = []
    for i in range(1, k + 1):
        rest = counts[i - 1].count - sum(math.comb(i, j) * math.factorial(j) * st[j - 1] for j in range(1, i))
        q, r = divmod(rest, math.factorial(i))
        if r or q < 0:
            raise DomainError(f"counts do not invert to stable-partition numbers at k = {i}")
        st.append(q)
    return Cardinality.finite(st[k - 1])


# -- explicit colorings -------------------------------------------------------------


@dataclass(frozen=True)
class StripColoring:
    """An eventually periodic coloring given by cell states.

    For t >= 0 the state is ``prefix[t]`` and afterwards cycles through
    ``cycle``.  On a two-way strip, t < 0 reads ``back_cycle[t mod len]``.
    """

    strip: Strip
    prefix: tuple
    cycle: tuple
    head_colors: tuple = ()
    back_cycle: tuple = ()

    def state(self, t: int) -> tuple:
        if t < 0:
            if not self.back_cycle:
                raise DomainError("one-way strips have no negative cells")
            return self.back_cycle[t % len(self.back_cycle)]
        if t < len(self.prefix):
            return self.prefix[t]
        return self.cycle[(t - len(self.prefix)) % len(self.cycle)]

    def __call__(self, v) -> int:
        t, i = v
        if t == -1 and not self.strip.spec.two_way:
            return self.head_colors[i]
        return self.state(t)[i]

    def describe(self) -> str:
        parts = []
        if self.head_colors:
            parts.append("head " + "".join(map(str, self.head_colors)))
        if self.back_cycle:
            parts.append("(" + " ".join("".join(map(str, s)) for s in self.back_cycle) + ")^-inf")
        if self.prefix:
            parts.append(" ".join("".join(map(str, s)) for s in self.prefix))
        parts.append("(" + " ".join("".join(map(str, s)) for s in self.cycle) + ")^inf")
        return " ".join(parts)


def _head_colorings(head: FiniteGraph, head_inter, state, n) -> list[tuple]:
    hv = head.vertex_count
    forbidden = [{state[c] for h, c in head_inter if h == v} for v in range(hv)]
    cands = [[x for x in range(n) if x not in forbidden[v]] for v in range(hv)]
    return [
        combo
        for combo in itertools.product(*cands)
        if all(combo[a] != combo[b] for a, b in head.edges)
    ]


def enumerate_finite_colorings(g: CountableGraph, n: int, **kw) -> list[StripColoring]:
    """Every [n]-coloring of a strip whose coloring set is finite."""
    strip = _as_strip(g)
    if strip is None:
        raise DomainError("explicit colorings are only produced for strips")
    td = build_transfer_digraph(strip, n, **kw)
    an = analyze_transfer(td)
    if not an.cardinality.is_finite:
        raise DomainError(f"the coloring set has cardinality {an.cardinality}")
    S = td.states
    out = []
    if td.two_way:
        for cyc in an.cycles:
            for p in range(len(cyc)):
                rot = tuple(S[s] for s in cyc[p:] + cyc[:p])
                out.append(StripColoring(strip, (), rot, back_cycle=rot))
        return out

    entry_cycle = {}
    for cyc in an.cycles:
        for p, s in enumerate(cyc):
            entry_cycle[s] = tuple(S[x] for x in cyc[p:] + cyc[:p])

    def paths(s, prefix):
        if s in entry_cycle:
            yield prefix, entry_cycle[s]
            return
        for t in td.arcs[s]:
            if t in an.relevant:
                yield from paths(t, prefix + (S[s],))

    for s in td.start_states():
        if s not in an.relevant:
            continue
        heads = [()] if strip.spec.head is None else _head_colorings(strip.spec.head, strip.spec.head_inter, S[s], n)
        for prefix, cycle in paths(s, ()):
            for hc in heads:
                out.append(StripColoring(strip, prefix, cycle, head_colors=hc))
    return out


def _shortest_path(td: TransferDigraph, sources, target, allowed) -> list | None:
    parent = {s: None for s in sources if s in allowed}
    queue = deque(parent)
    while queue:
        s = queue.popleft()
        if s == target:
            path = []
            while s is not None:
                path.append(s)
                s = parent[s]
            return path[::-1]
        for t in td.arcs[s]:
            if t in allowed and t not in parent:
                parent[t] = s
                queue.append(t)
    return None


@dataclass
class ContinuumWitness:
    state: tuple  # the branching cell state
    successors: tuple  # two distinct successors inside its SCC
    colorings: tuple  # two colorings differing exactly from ``position`` on
    position: int  # the first cell index where the two colorings differ


def continuum_witness(g: CountableGraph, n: int, *, delay: int = 0, **kw) -> ContinuumWitness:
    """Two colorings that agree up to a branching state and then split.

    ``delay`` extra turns around a cycle through the branching state move
    the split position to the right, so it can be placed anywhere past the
    first visit.
    """
    strip = _as_strip(g)
    if strip is None:
        raise DomainError("witnesses are only produced for strips")
    td = build_transfer_digraph(strip, n, **kw)
    an = analyze_transfer(td)
    if an.branch is None:
        raise DomainError(f"no branching: the coloring set has cardinality {an.cardinality}")
    b, s1, s2 = an.branch
    S = td.states
    loops = []
    for s in (s1, s2):
        back = _shortest_path(td, [s], b, an.relevant)
        loops.append(tuple(S[x] for x in [b] + back[:-1]))
    if td.two_way:
        lead = ()
        back_cycle = loops[0]
        head_colors = ()
    else:
        path = _shortest_path(td, [x for x in td.start_states() if x in an.relevant], b, an.relevant)
        lead = tuple(S[x] for x in path[:-1])
        back_cycle = ()
        first = path[0]
        head_colors = (
            _head_colorings(strip.spec.head, strip.spec.head_inter, S[first], n)[0]
            if strip.spec.head is not None
            else ()
        )
    prefix = lead + loops[0] * delay
    colorings = tuple(
        StripColoring(strip, prefix, loop, head_colors=head_colors, back_cycle=back_cycle)
        for loop in loops
    )
    return ContinuumWitness(S[b], (S[s1], S[s2]), colorings, len(prefix) + 1)


def is_proper_on_prefix(g: CountableGraph, coloring: Callable, probe: int = DEFAULT_PROBE) -> bool:
    """No edge among the first ``probe`` enumerated vertices is monochromatic."""
    verts = g.first_vertices(probe)
    colors = {v: coloring(v) for v in verts}
    if hasattr(g, "neighbors"):
        return all(colors[v] != colors[w] for v in verts for w in g.neighbors(v) if w in colors)
    for a in range(len(verts)):
        for b in range(a + 1, len(verts)):
            if colors[verts[a]] == colors[verts[b]] and g.adjacent(verts[a], verts[b]):
                return False
    return True


# -- maps built in proofs -------------------------------------------------------------


def refine_coloring(
    g: CountableGraph,
    c: Callable,
    n: int,
    i0: int,
    subset: Callable,
    *,
    probe: int = DEFAULT_PROBE,
) -> Callable:
    """Split color class i0: keep i0 on ``subset``, move the rest of the class to color n.

    The class is assumed infinite; only the first ``probe`` vertices are
    checked, both for properness of c and for ``subset`` staying inside the class.
    """
    verts = g.first_vertices(probe)
    if not any(c(v) == i0 for v in verts):
        raise DomainError(f"color class {i0} is empty on the first {probe} vertices")
    for v in verts:
        if subset(v) and c(v) != i0:
            raise DomainError(f"subset contains {v!r}, which has color {c(v)} rather than {i0}")
    if not is_proper_on_prefix(g, c, probe):
        raise DomainError(f"input coloring is improper on the first {probe} vertices")

    def refined(v):
        x = c(v)
        if x != i0:
            return x
        return i0 if subset(v) else n

    return refined


@dataclass
class CoveringWalk:
    """A walk s -> w(s) along edges; as a map from T_ℕ it is a homomorphism."""

    graph: CountableGraph
    walk: list

    def __call__(self, s: int):
        return self.walk[s]

    def covered_prefix(self) -> int:
        """Largest k such that the first k enumerated vertices all lie on the walk."""
        seen = set(self.walk)
        k = 0
        for v in self.graph.vertices():
            if v not in seen:
                return k
            k += 1
            if k > len(seen):
                return k

    def certify(self, k: int) -> bool:
        ok_edges = all(self.graph.adjacent(a, b) for a, b in zip(self.walk, self.walk[1:]))
        return ok_edges and self.covered_prefix() >= k


def covering_walk(g: CountableGraph | FiniteGraph, budget: int | None = None):
    """A surjective homomorphism from a path (finite g) or from T_ℕ (countable g).

    For a finite connected graph this is a depth-first walk with backtracking,
    returned as a GraphHom from P_m with m <= 2|V| - 1.  For a countable graph
    the first ``budget`` steps of a walk that eventually covers every vertex.
    """
    if isinstance(g, FiniteGraph):
        if not g.is_connected():
            raise DomainError("graph is disconnected")
        if g.vertex_count == 0:
            raise DomainError("empty graph")
        walk = [0]
        seen = {0}

        def dfs(u):
            for w in sorted(g.adjacency[u]):
                if w not in seen and len(seen) < g.vertex_count:
                    seen.add(w)
                    walk.append(w)
                    dfs(w)
                    if len(seen) < g.vertex_count:
                        walk.append(u)

        dfs(0)
        return GraphHom(path_graph(len(walk)), g, tuple(walk))

    if budget is None:
        raise DomainError("a countable walk needs a step budget")
    if isinstance(g, NaturalTree):
        walk = list(range(budget))
    elif isinstance(g, NaturalWheel):
        # spoke, center, next spoke, center, ...
        walk = [(k // 2 + 1) if k % 2 == 0 else 0 for k in range(budget)]
    elif isinstance(g, CompleteMinusEdge):
        order = [0, 2, 1] + list(range(3, budget))
        walk = order[:budget]
    else:
        strip = _as_strip(g)
        walk = _strip_walk(strip, budget)
    return CoveringWalk(g, walk)


def _strip_walk(strip: Strip, budget: int) -> list:
    targets = strip.vertices()
    walk = [next(targets)]
    for target in targets:
        if len(walk) >= budget:
            break
        if target in walk:
            continue
        route = _bfs_route(strip, walk[-1], target, cap=50 * budget * strip.spec.cell_size + 1000)
        if route is None:
            raise DomainError(f"no path to {target!r}: strip is disconnected")
        walk.extend(route[1:])
    return walk[:budget]


def _bfs_route(strip: Strip, src, dst, cap: int) -> list | None:
    parent = {src: None}
    queue = deque([src])
    while queue and len(parent) < cap:
        u = queue.popleft()
        if u == dst:
            path = []
            while u is not None:
                path.append(u)
                u = parent[u]
            return path[::-1]
        for w in strip.neighbors(u):
            if w not in parent:
                parent[w] = u
                queue.append(w)
    return None


@dataclass
class DistanceHom:
    """v -> d(p, v), a homomorphism into T_ℕ when the graph has no odd cycle."""

    graph: object
    base: object
    distance: Callable
    surjective: bool
    eccentricity: int | Infinite

    def __call__(self, v):
        return self.distance(v)


def distance_hom(g: CountableGraph | FiniteGraph, p, *, probe: int = DEFAULT_PROBE) -> DistanceHom:
    if isinstance(g, FiniteGraph):
        if not g.is_connected():
            raise PreconditionError("graph is disconnected")
        if two_coloring(g) is None:
            raise PreconditionError("graph has an odd cycle")
        dist = bfs_distances(g, p)
        table = tuple(dist)
        return DistanceHom(g, p, table.__getitem__, False, max(table))
    if isinstance(g, NaturalTree):
        return DistanceHom(g, p, lambda v: abs(v - p), True, INFINITE)
    if isinstance(g, NaturalWheel):
        if p == 0:
            return DistanceHom(g, p, lambda v: 0 if v == 0 else 1, False, 1)
        return DistanceHom(g, p, lambda v: 0 if v == p else (1 if v == 0 else 2), False, 2)
    if isinstance(g, CompleteMinusEdge):
        raise PreconditionError("graph has an odd cycle")
    strip = _as_strip(g)
    if strip is None:
        raise DomainError(f"unsupported family {type(g).__name__}")
    if count_colorings(strip, 2) == Cardinality.finite(0):
        raise PreconditionError("strip has an odd cycle")
    trunc, verts = strip.truncation(2 * strip.spec.cell_size + 4)
    if not trunc.is_connected():
        raise PreconditionError("strip is disconnected")

    @lru_cache(maxsize=None)
    def dist(v):
        route = _bfs_route(strip, p, v, cap=10**6)
        if route is None:
            raise DomainError(f"{v!r} not reached from {p!r}")
        return len(route) - 1

    # connected, infinite and of bounded degree, hence unbounded
    return DistanceHom(strip, p, dist, True, INFINITE)

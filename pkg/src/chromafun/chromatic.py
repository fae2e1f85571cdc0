"""Exact chromatic polynomials and their falling-factorial coefficients.

Everything here is integer arithmetic; no floats are ever produced.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Mapping, MutableMapping

from .errors import DomainError, NotChromaticError, ResourceError
from .graph import FiniteGraph
from .graph6 import emit_graph6

DEFAULT_VERTEX_LIMIT = 12


@dataclass(frozen=True)
class IntPolynomial:
    """Integer polynomial; ``coeffs[d]`` is the coefficient of t**d."""

    coeffs: tuple = ()

    def __post_init__(self):
        cs = [int(c) for c in self.coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    @classmethod
    def monomial(cls, degree: int, coefficient: int = 1) -> IntPolynomial:
        return cls((0,) * degree + (coefficient,))

    @classmethod
    def falling_factorial(cls, k: int) -> IntPolynomial:
        """t(t-1)...(t-k+1), the chromatic polynomial of K_k."""
        return _falling_factorial(k)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __getitem__(self, d: int) -> int:
        return self.coeffs[d] if 0 <= d < len(self.coeffs) else 0

    def __add__(self, other: IntPolynomial) -> IntPolynomial:
        n = max(len(self.coeffs), len(other.coeffs))
        return IntPolynomial(tuple(self[d] + other[d] for d in range(n)))

    def __sub__(self, other: IntPolynomial) -> IntPolynomial:
        n = max(len(self.coeffs), len(other.coeffs))
        return IntPolynomial(tuple(self[d] - other[d] for d in range(n)))

    def __mul__(self, other):
        if isinstance(other, int):
            return IntPolynomial(tuple(c * other for c in self.coeffs))
        if not self.coeffs or not other.coeffs:
            return IntPolynomial()
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return IntPolynomial(tuple(out))

    __rmul__ = __mul__

    def __call__(self, t: int) -> int:
        return evaluate(self, t)

    def to_json(self) -> dict:
        return {"coeffs": [str(c) for c in self.coeffs]}

    @classmethod
    def from_json(cls, obj: Mapping) -> IntPolynomial:
        return cls(tuple(int(c) for c in obj["coeffs"]))

    def __str__(self):
        if not self.coeffs:
            return "0"
        terms = []
        for d in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[d]
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            a = abs(c)
            if d == 0:
                body = str(a)
            else:
                mono = "t" if d == 1 else f"t^{d}"
                body = mono if a == 1 else f"{a}*{mono}"
            terms.append((sign, body))
        first_sign, first = terms[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in terms[1:]:
            out += f" {sign} {body}"
        return out


@lru_cache(maxsize=None)
def _falling_factorial(k: int) -> IntPolynomial:
    p = IntPolynomial((1,))
    for j in range(k):
        p = p * IntPolynomial((-j, 1))
    return p


def evaluate(p: IntPolynomial, n: int) -> int:
    acc = 0
    for c in reversed(p.coeffs):
        acc = acc * n + c
    return acc


@dataclass(frozen=True)
class StVector:
    """Stable-partition counts by number of blocks (the graphical Stirling vector).

    Zero entries are dropped, so two vectors compare equal iff all counts agree.
    """

    counts: tuple = ()

    def __post_init__(self):
        items = dict(self.counts) if not isinstance(self.counts, Mapping) else self.counts
        norm = tuple(sorted((int(k), int(v)) for k, v in items.items() if v))
        object.__setattr__(self, "counts", norm)

    @classmethod
    def from_mapping(cls, m: Mapping[int, int]) -> StVector:
        return cls(tuple(m.items()))

    def __getitem__(self, k: int) -> int:
        return dict(self.counts).get(k, 0)

    def as_dict(self) -> dict[int, int]:
        return dict(self.counts)

    def max_k(self) -> int:
        return self.counts[-1][0] if self.counts else 0

    def to_polynomial(self) -> IntPolynomial:
        total = IntPolynomial()
        for k, a in self.counts:
            total = total + IntPolynomial.falling_factorial(k) * a
        return total

    def first_difference(self, other: StVector) -> int | None:
        a, b = self.as_dict(), other.as_dict()
        diffs = [k for k in set(a) | set(b) if a.get(k, 0) != b.get(k, 0)]
        return min(diffs) if diffs else None

    def to_json(self) -> dict:
        return {"st": {str(k): str(v) for k, v in self.counts}}

    @classmethod
    def from_json(cls, obj: Mapping) -> StVector:
        return cls(tuple((int(k), int(v)) for k, v in obj["st"].items()))


def to_falling_factorial(p: IntPolynomial) -> StVector:
    """Coefficients of ``p`` in the basis t(t-1)...(t-k+1).

    Raises NotChromaticError when a coefficient comes out negative.
    """
    rest = p
    counts = {}
    while not rest.is_zero():
        k = rest.degree
        a = rest.coeffs[-1]
        if a < 0:
            raise NotChromaticError(f"negative coefficient {a} at falling factorial of degree {k}")
        counts[k] = a
        rest = rest - IntPolynomial.falling_factorial(k) * a
    return StVector.from_mapping(counts)


class PolynomialCache:
    """Thread-safe graph6 -> polynomial store, optionally shared between calls."""

    def __init__(self, entries: Mapping[str, IntPolynomial] | None = None):
        self._lock = threading.Lock()
        self._data: dict[str, IntPolynomial] = dict(entries or {})

    def get(self, key: str) -> IntPolynomial | None:
        with self._lock:
            return self._data.get(key)

    def __setitem__(self, key: str, value: IntPolynomial) -> None:
        with self._lock:
            self._data[key] = value

    def __contains__(self, key: str) -> bool:
        with self._lock:
            return key in self._data

    def __len__(self):
        with self._lock:
            return len(self._data)

    def items(self):
        with self._lock:
            return list(self._data.items())


def _bitmask_key(n: int, adj: tuple) -> str:
    """graph6 string of a bitmask-adjacency graph (the memo key)."""
    words = [n] if n < 63 else None
    if words is None:
        return emit_graph6(_to_graph(n, adj))
    acc = nbits = 0
    for j in range(1, n):
        row = adj[j]
        for i in range(j):
            acc = (acc << 1) | ((row >> i) & 1)
            nbits += 1
            if nbits == 6:
                words.append(acc)
                acc = nbits = 0
    if nbits:
        words.append(acc << (6 - nbits))
    return "".join(chr(w + 63) for w in words)


def _to_graph(n: int, adj: tuple) -> FiniteGraph:
    return FiniteGraph.from_edges(
        n, [(i, j) for j in range(n) for i in range(j) if (adj[j] >> i) & 1]
    )


def _contract(n: int, adj: tuple, u: int, v: int) -> tuple:
    """Merge v into u (u < v), drop v and shift higher labels down by one."""
    low = (1 << v) - 1

    def squeeze(mask):
        return (mask & low) | ((mask >> (v + 1)) << v)

    merged = (adj[u] | adj[v]) & ~((1 << u) | (1 << v))
    out = []
    for w in range(n):
        if w == v:
            continue
        if w == u:
            out.append(squeeze(merged))
            continue
        m = adj[w]
        if (m >> v) & 1:
            m = (m & ~(1 << v)) | (1 << u)
        out.append(squeeze(m))
    return tuple(out)


def _toggle(adj: tuple, u: int, v: int) -> tuple:
    out = list(adj)
    out[u] ^= 1 << v
    out[v] ^= 1 << u
    return tuple(out)


def _components(n: int, adj: tuple) -> list[int]:
    seen = 0
    comps = []
    for s in range(n):
        if (seen >> s) & 1:
            continue
        comp = frontier = 1 << s
        while frontier:
            nxt = 0
            f = frontier
            while f:
                low = f & -f
                nxt |= adj[low.bit_length() - 1]
                f ^= low
            frontier = nxt & ~comp
            comp |= nxt
        seen |= comp
        comps.append(comp)
    return comps


def _induced(adj: tuple, mask: int) -> tuple:
    verts = [v for v in range(len(adj)) if (mask >> v) & 1]
    pos = {v: i for i, v in enumerate(verts)}
    out = []
    for v in verts:
        m, row = 0, adj[v]
        for w in verts:
            if (row >> w) & 1:
                m |= 1 << pos[w]
        out.append(m)
    return tuple(out)


def _deletion_contraction(n: int, adj: tuple, memo: MutableMapping) -> IntPolynomial:
    degrees = [m.bit_count() for m in adj]
    edges2 = sum(degrees)
    if edges2 == 0:
        return IntPolynomial.monomial(n)
    if edges2 == n * (n - 1):
        return IntPolynomial.falling_factorial(n)
    key = _bitmask_key(n, adj)
    hit = memo.get(key)
    if hit is not None:
        return hit

    comps = _components(n, adj)
    if len(comps) > 1:
        # a disjoint union colors each component independently
        result = IntPolynomial((1,))
        isolated = 0
        for mask in comps:
            if mask & (mask - 1) == 0:
                isolated += 1
                continue
            sub = _induced(adj, mask)
            result = result * _deletion_contraction(len(sub), sub, memo)
        result = result * IntPolynomial.monomial(isolated)
    elif 2 * edges2 <= n * (n - 1):
        # sparse: P(G) = P(G - e) - P(G / e) on the edge of largest degree sum
        u, v = max(
            ((i, j) for j in range(n) for i in range(j) if (adj[j] >> i) & 1),
            key=lambda e: (degrees[e[0]] + degrees[e[1]], -e[0], -e[1]),
        )
        result = _deletion_contraction(n, _toggle(adj, u, v), memo) - _deletion_contraction(
            n - 1, _contract(n, adj, u, v), memo
        )
    else:
        # dense: the same identity read as P(G) = P(G + e) + P(G / e) on a non-edge
        u, v = max(
            ((i, j) for j in range(n) for i in range(j) if not (adj[j] >> i) & 1),
            key=lambda e: (degrees[e[0]] + degrees[e[1]], -e[0], -e[1]),
        )
        result = _deletion_contraction(n, _toggle(adj, u, v), memo) + _deletion_contraction(
            n - 1, _contract(n, adj, u, v), memo
        )
    memo[key] = result
    return result


def chromatic_polynomial(
    g: FiniteGraph,
    *,
    vertex_limit: int = DEFAULT_VERTEX_LIMIT,
    cache: PolynomialCache | None = None,
) -> IntPolynomial:
    """Chromatic polynomial by memoized deletion-contraction.

    ``cache`` may be shared across calls and threads; without it a private
    memo is used for this call only.
    """
    if g.vertex_count > vertex_limit:
        raise ResourceError(f"{g.vertex_count} vertices exceeds the limit of {vertex_limit}")
    memo = cache if cache is not None else {}
    adj = tuple(sum(1 << w for w in g.adjacency[v]) for v in range(g.vertex_count))
    return _deletion_contraction(g.vertex_count, adj, memo)


def chromatic_number(g: FiniteGraph, **kwargs) -> int:
    if g.vertex_count == 0:
        raise DomainError("the chromatic number of the empty graph is undefined")
    p = chromatic_polynomial(g, **kwargs)
    n = 1
    while evaluate(p, n) == 0:
        n += 1
    return n


def st_vector(g: FiniteGraph, **kwargs) -> StVector:
    return to_falling_factorial(chromatic_polynomial(g, **kwargs))


def decide_equivalent_finite(g1: FiniteGraph, g2: FiniteGraph, **kwargs) -> bool:
    return chromatic_polynomial(g1, **kwargs) == chromatic_polynomial(g2, **kwargs)


def polynomials(graphs: Iterable[FiniteGraph], **kwargs) -> list[IntPolynomial]:
    return [chromatic_polynomial(g, **kwargs) for g in graphs]

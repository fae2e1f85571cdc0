"""Cantor-Bernstein-Schröder bijections, plain and relative to a map of squares.

Finite maps are dicts.  Given injections i: X -> Y and j: Y -> X, the
back-and-forth set is C = ∪ C^n with C^0 = X \\ j(Y), C^{n+1} = j(i(C^n)), and
the bijection is r = i on C, j^{-1} off C.

For two such pairs related by maps f: X1 -> X2 and g: Y1 -> Y2, the two
bijections satisfy g ∘ r1 = r2 ∘ f as long as both squares commute and

    g^{-1}(i2(Z)) = i1(f^{-1}(Z)),  f^{-1}(j2(W)) = j1(g^{-1}(W))

for all Z ⊆ X2 and W ⊆ Y2.  Images and preimages both commute with unions, so
it is enough to check these identities on singletons.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from typing import Any, Callable, Mapping, Sequence

from .errors import DomainError, PreconditionError
from .functor import enumerate_colorings, pullback, pushforward
from .graph import FiniteGraph, GraphHom, Injection, is_surjective_hom, validate_hom


def _inverse(m: Mapping, name: str) -> dict:
    inv = {}
    for x, y in m.items():
        if y in inv:
            raise DomainError(f"{name} is not injective: {inv[y]!r} and {x!r} both map to {y!r}")
        inv[y] = x
    return inv


def _cbs_levels(X: Sequence, i: Mapping, j: Mapping) -> list[set]:
    """The sets C^0, C^1, ... until they become empty (at most |X| + 1 of them)."""
    j_image = set(j.values())
    level = {x for x in X if x not in j_image}
    levels = []
    seen: set = set()
    while level - seen:
        levels.append(level)
        seen |= level
        level = {j[i[x]] for x in level}
    return levels


def _bijection_from_levels(X, i, j_inv, levels) -> dict:
    C = set().union(*levels) if levels else set()
    return {x: (i[x] if x in C else j_inv[x]) for x in X}


def classic_cbs(f: Mapping, g: Mapping) -> dict:
    """A bijection A -> B built from injections f: A -> B and g: B -> A."""
    g_inv = _inverse(g, "g")
    _inverse(f, "f")
    levels = _cbs_levels(list(f), f, g)
    return _bijection_from_levels(list(f), f, g_inv, levels)


@dataclass
class InjectionSystem:
    """Two commuting squares of injections over the maps f: X1 -> X2, g: Y1 -> Y2."""

    X1: Sequence
    X2: Sequence
    Y1: Sequence
    Y2: Sequence
    f: Mapping
    g: Mapping
    i1: Mapping
    i2: Mapping
    j1: Mapping
    j2: Mapping

    def validate(self) -> None:
        for name in ("i1", "i2", "j1", "j2"):
            _inverse(getattr(self, name), name)
        for x in self.X1:
            if self.g[self.i1[x]] != self.i2[self.f[x]]:
                raise PreconditionError("square g∘i1 = i2∘f does not commute", witness=x)
        for y in self.Y1:
            if self.f[self.j1[y]] != self.j2[self.g[y]]:
                raise PreconditionError("square f∘j1 = j2∘g does not commute", witness=y)

        f_fibres, g_fibres = _fibres(self.f), _fibres(self.g)
        for z in self.X2:
            left = set(g_fibres.get(self.i2[z], ()))
            right = {self.i1[x] for x in f_fibres.get(z, ())}
            if left != right:
                raise PreconditionError(
                    "g^-1(i2(Z)) != i1(f^-1(Z)) for the singleton Z", witness=("Z", z)
                )
        for w in self.Y2:
            left = set(f_fibres.get(self.j2[w], ()))
            right = {self.j1[y] for y in g_fibres.get(w, ())}
            if left != right:
                raise PreconditionError(
                    "f^-1(j2(W)) != j1(g^-1(W)) for the singleton W", witness=("W", w)
                )


def _fibres(m: Mapping) -> dict:
    out = defaultdict(list)
    for x, y in m.items():
        out[y].append(x)
    return out


@dataclass
class CbsResult:
    r1: dict
    r2: dict
    levels1: list = field(repr=False)
    levels2: list = field(repr=False)

    @property
    def c_sets(self) -> tuple[set, set]:
        return (set().union(*self.levels1), set().union(*self.levels2))


def relative_cbs(sys: InjectionSystem, *, check: bool = True) -> CbsResult:
    """Bijections r1: X1 -> Y1 and r2: X2 -> Y2 with g ∘ r1 = r2 ∘ f."""
    if check:
        sys.validate()
    levels1 = _cbs_levels(sys.X1, sys.i1, sys.j1)
    levels2 = _cbs_levels(sys.X2, sys.i2, sys.j2)
    r1 = _bijection_from_levels(sys.X1, sys.i1, _inverse(sys.j1, "j1"), levels1)
    r2 = _bijection_from_levels(sys.X2, sys.i2, _inverse(sys.j2, "j2"), levels2)
    return CbsResult(r1, r2, levels1, levels2)


# -- lazy systems ----------------------------------------------------------------


@dataclass
class LazySquare:
    """One side of a system: injections i: X -> Y, j: Y -> X given as procedures.

    ``i_inverse`` and ``j_inverse`` return None off the image, which doubles
    as the image-membership test.
    """

    i: Callable[[Any], Any]
    j: Callable[[Any], Any]
    i_inverse: Callable[[Any], Any]
    j_inverse: Callable[[Any], Any]
    contains: Callable[[Any], bool] = lambda x: True


@dataclass(frozen=True)
class Undetermined:
    """Membership in C was not settled within the fuel; ``steps`` were traced."""

    steps: int


class OracleError(DomainError):
    pass


def _call(proc, arg, what):
    try:
        return proc(arg)
    except Exception as exc:  # oracle failures carry their own context
        raise OracleError(f"{what}({arg!r}) failed: {exc}") from exc


def lazy_cbs_evaluate(square: LazySquare, x, fuel: int):
    """r(x) computed by tracing x's j∘i ancestry backwards for at most ``fuel`` steps.

    The chain x, i^{-1}(j^{-1}(x)), ... either leaves j's image (x ∈ C),
    lands outside i's image (x ∉ C), repeats (x ∉ C) or runs out of fuel.
    """
    if not _call(square.contains, x, "contains"):
        raise DomainError(f"{x!r} is not an element of the source set")
    current = x
    seen = {x}
    for step in range(fuel + 1):
        y = _call(square.j_inverse, current, "j_inverse")
        if y is None:
            return _call(square.i, x, "i")
        if step == fuel:
            return Undetermined(step)
        prev = _call(square.i_inverse, y, "i_inverse")
        if prev is None:
            break
        if prev in seen:
            break
        seen.add(prev)
        current = prev
    return _call(square.j_inverse, x, "j_inverse")


def lazy_square_from_finite(X: Sequence, i: Mapping, j: Mapping) -> LazySquare:
    i_inv, j_inv = _inverse(i, "i"), _inverse(j, "j")
    members = set(X)
    return LazySquare(i.__getitem__, j.__getitem__, i_inv.get, j_inv.get, members.__contains__)


# -- coloring sets ---------------------------------------------------------------


@dataclass
class ChromaticCbs:
    """Commuting bijections r_m: χ(g1,[m]) -> χ(g2,[m]) and r_n for f: [m] -> [n]."""

    result: CbsResult
    system: InjectionSystem
    m: int
    n: int

    def index_pairs(self, g1: FiniteGraph, g2: FiniteGraph) -> dict:
        out = {}
        for size, r in ((self.m, self.result.r1), (self.n, self.result.r2)):
            src, dst = enumerate_colorings(g1, size), enumerate_colorings(g2, size)
            out[str(size)] = sorted([src.index(c), dst.index(r[c])] for c in r)
        return out


def chromatic_cbs(
    g1: FiniteGraph, g2: FiniteGraph, phi: GraphHom, psi: GraphHom, f: Injection, **kw
) -> ChromaticCbs:
    """Relative CBS on coloring sets: i = ψ^*, j = φ^*, vertical maps f_*.

    phi: g1 ->> g2 and psi: g2 ->> g1 must be surjective homomorphisms.
    """
    for name, h, src, dst in (("phi", phi, g1, g2), ("psi", psi, g2, g1)):
        if h.source != src or h.target != dst:
            raise DomainError(f"{name} has the wrong source or target")
        if not validate_hom(h):
            raise DomainError(f"{name} is not a graph homomorphism")
        if not is_surjective_hom(h):
            raise DomainError(f"{name} is not surjective")
    m, n = f.source_size, f.target_size
    X1 = enumerate_colorings(g1, m, **kw).colorings
    X2 = enumerate_colorings(g1, n, **kw).colorings
    Y1 = enumerate_colorings(g2, m, **kw).colorings
    Y2 = enumerate_colorings(g2, n, **kw).colorings
    sys = InjectionSystem(
        X1, X2, Y1, Y2,
        f={c: pushforward(f, c) for c in X1},
        g={c: pushforward(f, c) for c in Y1},
        i1={c: pullback(psi, c) for c in X1},
        i2={c: pullback(psi, c) for c in X2},
        j1={c: pullback(phi, c) for c in Y1},
        j2={c: pullback(phi, c) for c in Y2},
    )
    return ChromaticCbs(relative_cbs(sys), sys, m, n)


def random_fiber_system(rng, *, max_base: int = 6, max_fibre: int = 3) -> InjectionSystem:
    """A random finite system whose two squares are fiber products.

    The bottom row is a pair of random bijections i2, j2 between X2 and Y2
    (finite sets with injections both ways have equal size).  Fibres over
    points joined by i2 or j2 must have equal size, so one size is drawn per
    connected component; i1 and j1 are random bijections between matching
    fibres, which is exactly the fiber-product condition.
    """
    size = rng.randint(1, max_base)
    X2 = [("x", k) for k in range(size)]
    Y2 = [("y", k) for k in range(size)]
    i2 = dict(zip(X2, rng.sample(Y2, size)))
    j2 = dict(zip(Y2, rng.sample(X2, size)))

    parent = {p: p for p in X2 + Y2}

    def find(p):
        while parent[p] != p:
            parent[p] = parent[parent[p]]
            p = parent[p]
        return p

    for a, b in list(i2.items()) + list(j2.items()):
        parent[find(a)] = find(b)
    fibre_size = {}
    for p in X2 + Y2:
        fibre_size.setdefault(find(p), rng.randint(0, max_fibre))

    fibres = {p: [(p, t) for t in range(fibre_size[find(p)])] for p in X2 + Y2}
    X1 = [e for z in X2 for e in fibres[z]]
    Y1 = [e for w in Y2 for e in fibres[w]]
    f = {e: e[0] for e in X1}
    g = {e: e[0] for e in Y1}
    i1, j1 = {}, {}
    for z in X2:
        i1.update(zip(fibres[z], rng.sample(fibres[i2[z]], len(fibres[z]))))
    for w in Y2:
        j1.update(zip(fibres[w], rng.sample(fibres[j2[w]], len(fibres[w]))))
    return InjectionSystem(X1, X2, Y1, Y2, f, g, i1, i2, j1, j2)

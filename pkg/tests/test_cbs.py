import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from chromafun.cbs import (
    InjectionSystem,
    LazySquare,
    OracleError,
    Undetermined,
    chromatic_cbs,
    classic_cbs,
    lazy_cbs_evaluate,
    lazy_square_from_finite,
    random_fiber_system,
    relative_cbs,
)
from chromafun.errors import DomainError, PreconditionError
from chromafun.functor import ExplicitFamily, enumerate_colorings, verify_naturality
from chromafun.graph import GraphHom, Injection, all_injections, complete_graph, cycle_graph, path_graph


def is_bijection(r, X, Y):
    return sorted(r) == sorted(X) and sorted(r.values()) == sorted(Y)


def test_classic_examples():
    ident = {x: x for x in range(4)}
    assert classic_cbs(ident, ident) == ident
    r = classic_cbs({0: 1, 1: 2, 2: 0}, {0: 0, 1: 1, 2: 2})
    assert is_bijection(r, range(3), range(3))
    with pytest.raises(DomainError):
        classic_cbs({0: 1, 1: 1}, {0: 0, 1: 1})


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10**9))
def test_classic_random(seed):
    rng = random.Random(seed)
    A = list(range(5))
    f = dict(zip(A, rng.sample(A, 5)))
    g = dict(zip(A, rng.sample(A, 5)))
    assert is_bijection(classic_cbs(f, g), A, A)


def test_classic_is_relative_over_a_point():
    rng = random.Random(3)
    A = [("a", k) for k in range(6)]
    B = [("b", k) for k in range(6)]
    f = dict(zip(A, rng.sample(B, 6)))
    g = dict(zip(B, rng.sample(A, 6)))
    sys = InjectionSystem(A, ["*"], B, ["*"], {a: "*" for a in A}, {b: "*" for b in B}, f, {"*": "*"}, g, {"*": "*"})
    assert relative_cbs(sys).r1 == classic_cbs(f, g)


def test_identity_system():
    X = list(range(4))
    ident = {x: x for x in X}
    res = relative_cbs(InjectionSystem(X, X, X, X, ident, ident, ident, ident, ident, ident))
    assert res.r1 == ident and res.r2 == ident


def test_restriction_system():
    X1 = enumerate_colorings(path_graph(3), 2).colorings
    X2 = enumerate_colorings(path_graph(2), 2).colorings
    restrict = {c: c[:2] for c in X1}
    id1, id2 = {c: c for c in X1}, {c: c for c in X2}
    res = relative_cbs(InjectionSystem(X1, X2, X1, X2, restrict, restrict, id1, id2, id1, id2))
    assert res.r1 == id1 and res.r2 == id2


def check_levels(sys, res):
    n = max(len(res.levels1), len(res.levels2))
    for k in range(n):
        c1 = res.levels1[k] if k < len(res.levels1) else set()
        c2 = res.levels2[k] if k < len(res.levels2) else set()
        assert {x for x in sys.X1 if sys.f[x] in c2} == c1


@pytest.mark.parametrize("seed", range(200))
def test_random_fiber_systems(seed):
    sys = random_fiber_system(random.Random(seed))
    sys.validate()
    res = relative_cbs(sys)
    assert is_bijection(res.r1, sys.X1, sys.Y1)
    assert is_bijection(res.r2, sys.X2, sys.Y2)
    assert all(sys.g[res.r1[x]] == res.r2[sys.f[x]] for x in sys.X1)
    check_levels(sys, res)


def test_non_commuting_square_has_witness():
    X = [0, 1]
    ident = {0: 0, 1: 1}
    swap = {0: 1, 1: 0}
    sys = InjectionSystem(X, X, X, X, ident, ident, swap, ident, ident, ident)
    with pytest.raises(PreconditionError) as err:
        relative_cbs(sys)
    assert err.value.witness in X


def test_non_injective_leg():
    X = [0, 1]
    ident = {0: 0, 1: 1}
    sys = InjectionSystem(X, X, X, X, ident, ident, {0: 0, 1: 0}, ident, ident, ident)
    with pytest.raises(DomainError):
        relative_cbs(sys)


# -- lazy evaluation -----------------------------------------------------------


def successor_square():
    # X = Y = ℕ, i = j = successor, so C = {even numbers}
    return LazySquare(
        i=lambda x: x + 1,
        j=lambda y: y + 1,
        i_inverse=lambda y: y - 1 if y > 0 else None,
        j_inverse=lambda x: x - 1 if x > 0 else None,
        contains=lambda x: isinstance(x, int) and x >= 0,
    )


def test_lazy_outside_image_needs_no_fuel():
    assert lazy_cbs_evaluate(successor_square(), 0, 0) == 1


def test_lazy_chain_of_length_five():
    sq = successor_square()
    assert lazy_cbs_evaluate(sq, 10, 4) == Undetermined(4)
    assert lazy_cbs_evaluate(sq, 10, 5) == 11
    assert lazy_cbs_evaluate(sq, 9, 5) == 8
    assert isinstance(lazy_cbs_evaluate(sq, 9, 3), Undetermined)


def test_lazy_agrees_with_finite():
    for seed in range(30):
        sys = random_fiber_system(random.Random(seed))
        res = relative_cbs(sys)
        for X, i, j, r in ((sys.X1, sys.i1, sys.j1, res.r1), (sys.X2, sys.i2, sys.j2, res.r2)):
            sq = lazy_square_from_finite(X, i, j)
            for x in X:
                assert lazy_cbs_evaluate(sq, x, len(X)) == r[x]


def test_lazy_oracle_failure_is_wrapped():
    sq = successor_square()
    broken = LazySquare(sq.i, sq.j, lambda y: 1 / 0, sq.j_inverse, sq.contains)
    with pytest.raises(OracleError, match="i_inverse"):
        lazy_cbs_evaluate(broken, 5, 10)
    with pytest.raises(DomainError):
        lazy_cbs_evaluate(sq, -1, 3)


def test_lazy_relative_system_commutes():
    # X2 = Y2 = ℕ with successor both ways; fibres ℕ × {0, 1} with i1 flipping the bit
    bottom = successor_square()

    def inv(x):
        return None if x[0] == 0 else x

    top = LazySquare(
        i=lambda x: (x[0] + 1, 1 - x[1]),
        j=lambda y: (y[0] + 1, y[1]),
        i_inverse=lambda y: None if y[0] == 0 else (y[0] - 1, 1 - y[1]),
        j_inverse=lambda x: None if x[0] == 0 else (x[0] - 1, x[1]),
    )
    images = []
    for n in range(40):
        for b in (0, 1):
            y = lazy_cbs_evaluate(top, (n, b), 100)
            r2 = lazy_cbs_evaluate(bottom, n, 100)
            assert y[0] == r2
            images.append(y)
    assert len(set(images)) == len(images)


# -- coloring sets ---------------------------------------------------------------


def rotation(n, k=1):
    g = cycle_graph(n)
    return GraphHom(g, g, tuple((v + k) % n for v in range(n)))


def check_chromatic(res, g1, g2, f):
    sys = res.system
    r1, r2 = res.result.r1, res.result.r2
    assert is_bijection(r1, sys.X1, sys.Y1) and is_bijection(r2, sys.X2, sys.Y2)
    for c in sys.X1:
        assert tuple(f.map[x] for x in r1[c]) == r2[tuple(f.map[x] for x in c)]


def test_cycle_rotation():
    g = cycle_graph(5)
    f = Injection(3, 4, (0, 1, 3))
    res = chromatic_cbs(g, g, rotation(5), rotation(5, 2), f)
    assert len(res.system.X1) == 30 and len(res.system.X2) == 240
    check_chromatic(res, g, g, f)
    pairs = res.index_pairs(g, g)
    assert len(pairs["3"]) == 30


def test_identity_homs_give_identity():
    g = path_graph(4)
    ident = GraphHom(g, g, (0, 1, 2, 3))
    res = chromatic_cbs(g, g, ident, ident, Injection(2, 3, (2, 0)))
    assert all(k == v for k, v in res.result.r1.items())


def test_path_reversal_all_injections():
    g = path_graph(4)
    rev = GraphHom(g, g, (3, 2, 1, 0))
    for n in range(5):
        for m in range(n + 1):
            for f in all_injections(m, n):
                check_chromatic(chromatic_cbs(g, g, rev, rev, f), g, g, f)


def test_non_surjective_hom_rejected():
    k2, k3 = complete_graph(2), complete_graph(3)
    with pytest.raises(DomainError):
        chromatic_cbs(k2, k3, GraphHom(k2, k3, (0, 1)), GraphHom(k3, k2, (0, 1, 0)), Injection(1, 2, (0,)))


def test_components_assemble_into_natural_family():
    g = cycle_graph(5)
    phi, psi = rotation(5), rotation(5, 3)
    tables = {}
    for m in range(1, 5):
        for f in all_injections(m, m + 1 if m < 4 else m):
            res = chromatic_cbs(g, g, phi, psi, f)
            src = enumerate_colorings(g, m)
            dst = enumerate_colorings(g, m)
            table = np.array([dst.index(res.result.r1[c]) for c in src.colorings], dtype=np.int64)
            if m in tables:
                assert np.array_equal(tables[m], table)
            tables[m] = table
    tables[0] = np.zeros(0, dtype=np.int64)
    fam = ExplicitFamily(g, g, tables)
    for m in range(5):
        for k in range(m + 1):
            for f in all_injections(k, m):
                assert verify_naturality(fam, f)
